// SPDX-License-Identifier: Apache-2.0
//
// mmfp: RSS-fingerprinting positioning library for distributed massive MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mmfp {

// All randomized operations take an explicit engine; callers own the streams.
using Rng = std::mt19937_64;

// One step of the splitmix64 sequence. Used as the mixing primitive for
// counter-based seed derivation, so that every (stream, index...) tuple maps
// to a statistically independent seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a child seed from a master seed and up to three stream indexes by
// chaining splitmix64 over the inputs. Deterministic and order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = master;
    std::uint64_t out = splitmix64(s);
    s ^= stream;
    out ^= splitmix64(s);
    s ^= a;
    out ^= splitmix64(s);
    s ^= b;
    out ^= splitmix64(s);
    return out;
}

// Fisher-Yates permutation of {0..n-1} driven by a splitmix64 stream. Pinned
// algorithm, so splits and sweeps reproduce exactly for a given seed.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::uint64_t state = seed;
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(splitmix64(state) % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

}  // namespace mmfp
