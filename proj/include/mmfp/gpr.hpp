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
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "mmfp/channel.hpp"
#include "mmfp/training_set.hpp"

namespace mmfp {

/// Kernel hyperparameters: a squared-exponential term weighted by theta0
/// with inverse squared length-scale theta1, plus a linear term weighted by
/// theta2. All non-negative, not all zero.
struct KernelParams {
    double theta0 = 1.0;  // dB^2-scaled signal variance weight
    double theta1 = 1.0;  // inverse squared length-scale, dB^-2
    double theta2 = 0.0;  // linear-term weight

    void validate() const;
};

/// k(a, b) = theta0 * exp(-theta1 * ||a - b||^2) + theta2 * a.b
double kernel_eval(const RssVector& a, const RssVector& b, const KernelParams& k);

/// L x L kernel matrix over the rows of `inputs`. The upper triangle is
/// computed and mirrored, so the result is exactly symmetric.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& inputs, const KernelParams& k);

/// Hyperparameter search configuration. The search runs Nelder-Mead in
/// log-parameter space, once from a data-driven heuristic start and once
/// from each of `random_restarts` perturbed starts.
struct FixedHyperparams {
    KernelParams kernel;
    double noise_std = 1.0e-6;  // meters
};

struct FitConfig {
    int random_restarts = 5;
    int max_evals = 200;        // objective evaluations per start, per coordinate
    double tolerance = 1.0e-6;  // simplex value-spread stopping tolerance
    std::uint64_t seed = 0;     // restart perturbation stream
    std::optional<FixedHyperparams> fixed;  // skip the search entirely

    void validate() const;
};

/// One coordinate's posterior machinery: hyperparameters, the lower
/// Cholesky factor of (C + noise^2 I + jitter I), and the precomputed
/// prediction weights alpha = (C + noise^2 I + jitter I)^-1 (targets - mean).
struct CoordinateModel {
    KernelParams kernel;
    double noise_std = 0.0;      // meters
    double target_mean = 0.0;    // meters
    double jitter = 0.0;         // diagonal stabilization actually applied
    double log_marginal = 0.0;   // evidence at the fitted parameters
    int search_evaluations = 0;  // objective evaluations spent (0 if fixed)
    Eigen::MatrixXd chol_lower;  // L x L
    Eigen::VectorXd weights;     // alpha, length L
};

struct GprModel {
    std::shared_ptr<const TrainingSet> training;
    CoordinateModel coord_x1;
    CoordinateModel coord_x2;

    Eigen::Index size() const { return training->size(); }
    Eigen::Index dimension() const { return training->dimension(); }
    const CoordinateModel& coordinate(int i) const { return i == 1 ? coord_x1 : coord_x2; }
};

struct Prediction {
    double mean_x1 = 0.0;
    double var_x1 = 0.0;
    double mean_x2 = 0.0;
    double var_x2 = 0.0;
};

/// Gaussian-process evidence of coordinate `coordinate` (1 or 2) of the
/// training targets under the given hyperparameters; targets are centered
/// by their mean. Computed through the jitter-stabilized Cholesky factor.
double log_marginal_likelihood(const TrainingSet& train, int coordinate,
                               const KernelParams& k, double noise_std);

/// Fits both coordinate models. With cfg.fixed set the search is skipped
/// (the only mode allowed for L == 1). Deterministic given cfg.seed.
GprModel fit(const TrainingSet& train, const FitConfig& cfg = {});

/// Posterior mean and variance of each coordinate at a test RSS vector.
/// Uses only precomputed factors: O(L^2) per call.
Prediction predict(const GprModel& model, const RssVector& p);

/// Structured-text (JSON) model persistence. The file stores
/// hyperparameters, target means, fit diagnostics, and the full training
/// set; factors and weights are recomputed on load and checked against the
/// stored evidence values.
std::string model_to_json(const GprModel& model);
GprModel model_from_json(const std::string& text);
void save_model(const GprModel& model, const std::string& path);
GprModel load_model(const std::string& path);

}  // namespace mmfp
