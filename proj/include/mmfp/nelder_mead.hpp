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

#include <functional>

#include <Eigen/Core>

namespace mmfp {

struct DirectSearchResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead simplex minimization. The initial simplex is
/// x0 plus `step` along each axis. Stops when the spread of function values
/// across the simplex falls below `ftol` or after `max_evals` objective
/// evaluations. Fully deterministic.
DirectSearchResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const Eigen::VectorXd& x0, double step, int max_evals,
                               double ftol);

}  // namespace mmfp
