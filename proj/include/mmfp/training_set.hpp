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

#include <Eigen/Core>

#include "mmfp/errors.hpp"
#include "mmfp/geometry.hpp"

namespace mmfp {

/// Fingerprint database: L RSS vectors (rows of `inputs`, all of length M)
/// with the positions they were measured at.
struct TrainingSet {
    Eigen::MatrixXd inputs;      // L x M, dB
    Eigen::VectorXd targets_x1;  // L, meters
    Eigen::VectorXd targets_x2;  // L, meters

    Eigen::Index size() const { return inputs.rows(); }
    Eigen::Index dimension() const { return inputs.cols(); }

    Position position(Eigen::Index l) const { return Position{targets_x1[l], targets_x2[l]}; }

    void validate() const {
        if (inputs.rows() < 1) throw ValidationError("training set must contain at least one fingerprint");
        if (inputs.cols() < 1) throw ValidationError("fingerprints must have at least one antenna value");
        if (targets_x1.size() != inputs.rows() || targets_x2.size() != inputs.rows())
            throw DimensionError("training target lengths do not match the input count");
        if (!inputs.allFinite() || !targets_x1.allFinite() || !targets_x2.allFinite())
            throw ValidationError("training set contains non-finite entries");
    }
};

}  // namespace mmfp
