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

#include "mmfp/knn.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "mmfp/errors.hpp"

namespace mmfp {

void KnnConfig::validate() const {
    if (kappa < 1) throw ValidationError("kappa must be >= 1");
    if (!(zero_distance_epsilon >= 0.0))
        throw ValidationError("zero_distance_epsilon must be >= 0");
}

Position knn_locate(const TrainingSet& train, const RssVector& p, const KnnConfig& cfg) {
    train.validate();
    cfg.validate();
    if (p.size() != train.dimension())
        throw DimensionError("test vector has length " + std::to_string(p.size()) +
                             ", fingerprints have " + std::to_string(train.dimension()));
    const Eigen::Index n = train.size();
    if (cfg.kappa > n)
        throw ValidationError("kappa " + std::to_string(cfg.kappa) + " exceeds the " +
                              std::to_string(n) + " stored fingerprints");

    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Eigen::Index l = 0; l < n; ++l) {
        d2[static_cast<std::size_t>(l)] = (train.inputs.row(l).transpose() - p).squaredNorm();
        if (d2[static_cast<std::size_t>(l)] < cfg.zero_distance_epsilon)
            return train.position(l);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::partial_sort(order.begin(), order.begin() + cfg.kappa, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          const double da = d2[static_cast<std::size_t>(a)];
                          const double db = d2[static_cast<std::size_t>(b)];
                          return da < db || (da == db && a < b);
                      });

    double wsum = 0.0, x1 = 0.0, x2 = 0.0;
    for (int i = 0; i < cfg.kappa; ++i) {
        const Eigen::Index l = order[static_cast<std::size_t>(i)];
        const double w = 1.0 / d2[static_cast<std::size_t>(l)];
        wsum += w;
        x1 += w * train.targets_x1[l];
        x2 += w * train.targets_x2[l];
    }
    return Position{x1 / wsum, x2 / wsum};
}

}  // namespace mmfp
