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

#include <cmath>

#include "mmfp/errors.hpp"

namespace mmfp {

/// 2-D coordinate in meters. Both fields must be finite.
struct Position {
    double x1 = 0.0;
    double x2 = 0.0;

    bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }
};

inline bool operator==(const Position& a, const Position& b) {
    return a.x1 == b.x1 && a.x2 == b.x2;
}

/// Axis-aligned rectangle [x0, x0+width] x [y0, y0+height].
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double width = 0.0;
    double height = 0.0;

    bool degenerate() const { return !(width > 0.0) || !(height > 0.0); }
    bool contains(const Position& p) const {
        return p.x1 >= x0 && p.x1 <= x0 + width && p.x2 >= y0 && p.x2 <= y0 + height;
    }
};

/// Euclidean distance in meters.
inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x1 - b.x1, a.x2 - b.x2);
}

}  // namespace mmfp
