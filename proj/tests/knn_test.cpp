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

#include "mmfp/knn.hpp"
#include "mmfp/rng.hpp"

using namespace mmfp;

namespace {

TrainingSet grid_set(Rng& rng, Eigen::Index L, Eigen::Index M) {
    std::normal_distribution<double> rss(-30.0, 6.0);
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    TrainingSet t;
    t.inputs.resize(L, M);
    t.targets_x1.resize(L);
    t.targets_x2.resize(L);
    for (Eigen::Index l = 0; l < L; ++l) {
        for (Eigen::Index m = 0; m < M; ++m) t.inputs(l, m) = rss(rng);
        t.targets_x1[l] = coord(rng);
        t.targets_x2[l] = coord(rng);
    }
    return t;
}

}  // namespace

TEST_CASE("knn_locate: exact signal match short-circuits to the stored site") {
    Rng rng(31);
    const TrainingSet t = grid_set(rng, 20, 5);
    KnnConfig cfg;
    cfg.kappa = 4;
    const Position got = knn_locate(t, t.inputs.row(7).transpose(), cfg);
    CHECK(got.x1 == t.targets_x1[7]);
    CHECK(got.x2 == t.targets_x2[7]);
}

TEST_CASE("knn_locate: two-site hand example lands exactly on (2, 0)") {
    // Signals 0 and 3, query 1: squared distances 1 and 4, weights 1 and 1/4,
    // estimate = (1*0 + 0.25*10) / 1.25 = 2 exactly in binary arithmetic.
    TrainingSet t;
    t.inputs.resize(2, 1);
    t.inputs << 0.0, 3.0;
    t.targets_x1.resize(2);
    t.targets_x1 << 0.0, 10.0;
    t.targets_x2.resize(2);
    t.targets_x2 << 0.0, 0.0;

    RssVector q(1);
    q << 1.0;
    KnnConfig cfg;
    cfg.kappa = 2;
    const Position got = knn_locate(t, q, cfg);
    CHECK(got.x1 == 2.0);
    CHECK(got.x2 == 0.0);
}

TEST_CASE("knn_locate: kappa=1 returns the nearest stored site") {
    Rng rng(32);
    const TrainingSet t = grid_set(rng, 50, 4);
    KnnConfig cfg;
    cfg.kappa = 1;
    RssVector q = t.inputs.row(13).transpose();
    q[0] += 0.5;  // close to site 13 but not an exact match
    Eigen::Index best = 0;
    double best_d2 = (t.inputs.row(0).transpose() - q).squaredNorm();
    for (Eigen::Index l = 1; l < t.size(); ++l) {
        const double d2 = (t.inputs.row(l).transpose() - q).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = l;
        }
    }
    const Position got = knn_locate(t, q, cfg);
    CHECK(got.x1 == t.targets_x1[best]);
    CHECK(got.x2 == t.targets_x2[best]);
}

TEST_CASE("knn_locate: equidistant neighbours with kappa=L give the centroid") {
    // Four sites on a signal-space square, query at its centre.
    TrainingSet t;
    t.inputs.resize(4, 2);
    t.inputs << 1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0;
    t.targets_x1.resize(4);
    t.targets_x1 << 10.0, 20.0, 30.0, 40.0;
    t.targets_x2.resize(4);
    t.targets_x2 << 4.0, 4.0, 8.0, 8.0;

    RssVector q(2);
    q.setZero();
    KnnConfig cfg;
    cfg.kappa = 4;
    const Position got = knn_locate(t, q, cfg);
    CHECK(std::abs(got.x1 - 25.0) < 1e-12);
    CHECK(std::abs(got.x2 - 6.0) < 1e-12);
}

TEST_CASE("knn_locate: estimates stay inside the neighbour bounding box") {
    Rng rng(33);
    const TrainingSet t = grid_set(rng, 60, 5);
    KnnConfig cfg;
    cfg.kappa = 5;
    std::normal_distribution<double> rss(-30.0, 6.0);
    for (int trial = 0; trial < 40; ++trial) {
        RssVector q(5);
        for (int j = 0; j < 5; ++j) q[j] = rss(rng);
        const Position got = knn_locate(t, q, cfg);
        CHECK(got.x1 >= t.targets_x1.minCoeff() - 1e-12);
        CHECK(got.x1 <= t.targets_x1.maxCoeff() + 1e-12);
        CHECK(got.x2 >= t.targets_x2.minCoeff() - 1e-12);
        CHECK(got.x2 <= t.targets_x2.maxCoeff() + 1e-12);
    }
}

TEST_CASE("knn_locate: invariant under training-set permutation") {
    Rng rng(34);
    const TrainingSet t = grid_set(rng, 25, 4);

    TrainingSet shuffled;
    const auto order = shuffled_indices(25, 99);
    shuffled.inputs.resize(25, 4);
    shuffled.targets_x1.resize(25);
    shuffled.targets_x2.resize(25);
    for (Eigen::Index i = 0; i < 25; ++i) {
        const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
        shuffled.inputs.row(i) = t.inputs.row(src);
        shuffled.targets_x1[i] = t.targets_x1[src];
        shuffled.targets_x2[i] = t.targets_x2[src];
    }

    KnnConfig cfg;
    cfg.kappa = 6;
    std::normal_distribution<double> rss(-30.0, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        RssVector q(4);
        for (int j = 0; j < 4; ++j) q[j] = rss(rng);
        const Position a = knn_locate(t, q, cfg);
        const Position b = knn_locate(shuffled, q, cfg);
        CHECK(std::abs(a.x1 - b.x1) < 1e-12);
        CHECK(std::abs(a.x2 - b.x2) < 1e-12);
    }
}

TEST_CASE("knn_locate: pulling a site closer in signal space pulls the estimate") {
    TrainingSet t;
    t.inputs.resize(3, 1);
    t.inputs << 2.0, 4.0, 6.0;
    t.targets_x1.resize(3);
    t.targets_x1 << 0.0, 50.0, 100.0;
    t.targets_x2.resize(3);
    t.targets_x2.setZero();

    RssVector q(1);
    q << 4.5;
    KnnConfig cfg;
    cfg.kappa = 3;
    const Position before = knn_locate(t, q, cfg);

    t.inputs(2, 0) = 4.6;  // third site now much closer to the query
    const Position after = knn_locate(t, q, cfg);
    CHECK(after.x1 > before.x1);
}

TEST_CASE("knn_locate: exact distance ties resolve to the lower index") {
    TrainingSet t;
    t.inputs.resize(2, 1);
    t.inputs << 1.0, 3.0;  // both at squared distance 1 from the query
    t.targets_x1.resize(2);
    t.targets_x1 << 11.0, 77.0;
    t.targets_x2.resize(2);
    t.targets_x2 << 5.0, 9.0;

    RssVector q(1);
    q << 2.0;
    KnnConfig cfg;
    cfg.kappa = 1;
    const Position got = knn_locate(t, q, cfg);
    CHECK(got.x1 == 11.0);
    CHECK(got.x2 == 5.0);
}

TEST_CASE("knn_locate: configuration and argument validation") {
    Rng rng(35);
    const TrainingSet t = grid_set(rng, 5, 3);
    RssVector q(3);
    q.setZero();

    KnnConfig cfg;
    cfg.kappa = 6;
    CHECK_THROWS_AS(knn_locate(t, q, cfg), ValidationError);

    cfg.kappa = 0;
    CHECK_THROWS_AS(knn_locate(t, q, cfg), ValidationError);

    cfg.kappa = 2;
    RssVector wrong(4);
    wrong.setZero();
    CHECK_THROWS_AS(knn_locate(t, wrong, cfg), DimensionError);
}
