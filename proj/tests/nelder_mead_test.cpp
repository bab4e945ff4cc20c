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

#include <cmath>

#include <doctest.h>

#include "mmfp/nelder_mead.hpp"

using namespace mmfp;

TEST_CASE("nelder_mead: quadratic bowl") {
    auto f = [](const Eigen::VectorXd& x) {
        return (x[0] - 3.0) * (x[0] - 3.0) + (x[1] + 1.0) * (x[1] + 1.0);
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
    const DirectSearchResult res = nelder_mead(f, x0, 1.0, 400, 1e-12);
    CHECK(res.converged);
    CHECK(std::abs(res.x[0] - 3.0) < 1e-3);
    CHECK(std::abs(res.x[1] + 1.0) < 1e-3);
    CHECK(res.value < 1e-6);
}

TEST_CASE("nelder_mead: Rosenbrock valley") {
    auto f = [](const Eigen::VectorXd& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const DirectSearchResult res = nelder_mead(f, x0, 0.5, 800, 1e-14);
    CHECK(res.value < 1e-4);
}

TEST_CASE("nelder_mead: deterministic") {
    auto f = [](const Eigen::VectorXd& x) { return std::cos(x[0]) + x[1] * x[1]; };
    Eigen::VectorXd x0(2);
    x0 << 1.0, 2.0;
    const DirectSearchResult a = nelder_mead(f, x0, 0.3, 200, 1e-10);
    const DirectSearchResult b = nelder_mead(f, x0, 0.3, 200, 1e-10);
    CHECK(a.value == b.value);
    CHECK(a.x[0] == b.x[0]);
    CHECK(a.x[1] == b.x[1]);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("nelder_mead: non-finite objective values are survivable") {
    auto f = [](const Eigen::VectorXd& x) {
        if (x[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return (x[0] - 2.0) * (x[0] - 2.0);
    };
    Eigen::VectorXd x0(1);
    x0 << 0.5;
    const DirectSearchResult res = nelder_mead(f, x0, 1.0, 200, 1e-12);
    CHECK(std::isfinite(res.value));
    CHECK(std::abs(res.x[0] - 2.0) < 1e-3);
}

TEST_CASE("nelder_mead: respects the evaluation budget") {
    int calls = 0;
    auto f = [&calls](const Eigen::VectorXd& x) {
        ++calls;
        return x.squaredNorm();
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(3, 10.0);
    const DirectSearchResult res = nelder_mead(f, x0, 1.0, 50, 0.0);
    CHECK(calls <= 58);  // one simplex round of slack past the cap
    CHECK(res.evaluations == calls);
}
