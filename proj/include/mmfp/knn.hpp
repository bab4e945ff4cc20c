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

#include "mmfp/channel.hpp"
#include "mmfp/geometry.hpp"
#include "mmfp/training_set.hpp"

namespace mmfp {

struct KnnConfig {
    int kappa = 4;
    // Signal-space squared distance below which a fingerprint counts as an
    // exact hit and its position is returned directly.
    double zero_distance_epsilon = 1.0e-12;

    void validate() const;
};

// Weighted k-nearest-neighbour position estimate in signal space. Neighbour
// weights are the inverse squared RSS distances; ties resolve to the lower
// fingerprint index.
Position knn_locate(const TrainingSet& train, const RssVector& p, const KnnConfig& cfg = {});

}  // namespace mmfp
