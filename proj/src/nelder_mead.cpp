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

#include "mmfp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mmfp {

DirectSearchResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const Eigen::VectorXd& x0, double step, int max_evals,
                               double ftol) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0;  // reflection
    const double gamma = 2.0;  // expansion
    const double beta = 0.5;   // contraction
    const double delta = 0.5;  // shrink

    DirectSearchResult result;

    std::vector<Eigen::VectorXd> verts(static_cast<std::size_t>(n) + 1, x0);
    std::vector<double> fvals(static_cast<std::size_t>(n) + 1);
    int evals = 0;

    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        double f = objective(x);
        if (!std::isfinite(f)) f = 1.0e100;
        return f;
    };

    for (int i = 1; i <= n; ++i) verts[static_cast<std::size_t>(i)][i - 1] += step;
    for (int i = 0; i <= n && evals < max_evals; ++i)
        fvals[static_cast<std::size_t>(i)] = eval(verts[static_cast<std::size_t>(i)]);

    std::vector<int> order(static_cast<std::size_t>(n) + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (fvals[static_cast<std::size_t>(a)] != fvals[static_cast<std::size_t>(b)])
                return fvals[static_cast<std::size_t>(a)] < fvals[static_cast<std::size_t>(b)];
            return a < b;  // deterministic tie-break
        });
        const int best = order[0];
        const int worst = order[static_cast<std::size_t>(n)];
        const int second_worst = order[static_cast<std::size_t>(n) - 1];

        if (std::abs(fvals[static_cast<std::size_t>(worst)] - fvals[static_cast<std::size_t>(best)]) <= ftol) {
            result.converged = true;
            break;
        }

        // Centroid of all vertices except the worst.
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += verts[static_cast<std::size_t>(i)];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd& xw = verts[static_cast<std::size_t>(worst)];
        Eigen::VectorXd xr = centroid + alpha * (centroid - xw);
        const double fr = eval(xr);

        if (fr < fvals[static_cast<std::size_t>(best)]) {
            Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
            const double fe = evals < max_evals ? eval(xe) : fr;
            if (fe < fr) {
                verts[static_cast<std::size_t>(worst)] = xe;
                fvals[static_cast<std::size_t>(worst)] = fe;
            } else {
                verts[static_cast<std::size_t>(worst)] = xr;
                fvals[static_cast<std::size_t>(worst)] = fr;
            }
        } else if (fr < fvals[static_cast<std::size_t>(second_worst)]) {
            verts[static_cast<std::size_t>(worst)] = xr;
            fvals[static_cast<std::size_t>(worst)] = fr;
        } else {
            // Contract toward the better of the worst vertex and the reflection.
            const bool outside = fr < fvals[static_cast<std::size_t>(worst)];
            Eigen::VectorXd xc = outside ? centroid + beta * (xr - centroid)
                                         : centroid + beta * (xw - centroid);
            const double fc = evals < max_evals ? eval(xc) : fr;
            if (fc < std::min(fr, fvals[static_cast<std::size_t>(worst)])) {
                verts[static_cast<std::size_t>(worst)] = xc;
                fvals[static_cast<std::size_t>(worst)] = fc;
            } else {
                // Shrink everything toward the best vertex.
                for (int i = 0; i <= n && evals < max_evals; ++i) {
                    if (i == best) continue;
                    verts[static_cast<std::size_t>(i)] =
                        verts[static_cast<std::size_t>(best)] +
                        delta * (verts[static_cast<std::size_t>(i)] - verts[static_cast<std::size_t>(best)]);
                    fvals[static_cast<std::size_t>(i)] = eval(verts[static_cast<std::size_t>(i)]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fvals[static_cast<std::size_t>(i)] < fvals[static_cast<std::size_t>(best)]) best = i;
    result.x = verts[static_cast<std::size_t>(best)];
    result.value = fvals[static_cast<std::size_t>(best)];
    result.evaluations = evals;
    return result;
}

}  // namespace mmfp
