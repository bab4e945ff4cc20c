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

#include "mmfp/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "mmfp/nelder_mead.hpp"
#include "mmfp/rng.hpp"

namespace mmfp {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Scalar kernel from precomputed squared distance and dot product. Every
// kernel entry in this module goes through this one expression, so cached
// and direct evaluations agree bitwise.
inline double kernel_from_parts(double d2, double dot, const KernelParams& k) {
    return k.theta0 * std::exp(-k.theta1 * d2) + k.theta2 * dot;
}

// Pairwise squared distances and dot products of the training inputs,
// exactly symmetric by construction. Computed once per fit and shared by
// every objective evaluation.
struct PairwiseCache {
    Eigen::MatrixXd d2;    // L x L
    Eigen::MatrixXd gram;  // L x L

    static PairwiseCache build(const Eigen::MatrixXd& inputs) {
        const Eigen::Index n = inputs.rows();
        // Materialized as dense vectors so every entry reduces in the same
        // order as kernel_eval on two vectors, making the two paths agree
        // bit for bit.
        std::vector<Eigen::VectorXd> rows(static_cast<std::size_t>(n));
        for (Eigen::Index l = 0; l < n; ++l)
            rows[static_cast<std::size_t>(l)] = inputs.row(l).transpose();

        PairwiseCache c;
        c.d2.resize(n, n);
        c.gram.resize(n, n);
        for (Eigen::Index l = 0; l < n; ++l) {
            const Eigen::VectorXd& xl = rows[static_cast<std::size_t>(l)];
            c.d2(l, l) = 0.0;
            c.gram(l, l) = xl.dot(xl);
            for (Eigen::Index j = l + 1; j < n; ++j) {
                const Eigen::VectorXd& xj = rows[static_cast<std::size_t>(j)];
                const double d2 = (xl - xj).squaredNorm();
                const double dot = xl.dot(xj);
                c.d2(l, j) = d2;
                c.d2(j, l) = d2;
                c.gram(l, j) = dot;
                c.gram(j, l) = dot;
            }
        }
        return c;
    }

    void fill_kernel(const KernelParams& k, Eigen::MatrixXd& out) const {
        const Eigen::Index n = d2.rows();
        out.resize(n, n);
        for (Eigen::Index l = 0; l < n; ++l) {
            for (Eigen::Index j = l; j < n; ++j) {
                const double v = kernel_from_parts(d2(l, j), gram(l, j), k);
                out(l, j) = v;
                out(j, l) = v;
            }
        }
    }
};

// Cholesky with escalating diagonal jitter: 1e-8 * mean(diag), then x10 per
// attempt up to 1e-2 * mean(diag). Returns the jitter that succeeded.
double factorize_with_jitter(const Eigen::MatrixXd& a, Eigen::LLT<Eigen::MatrixXd>& llt) {
    double scale = a.diagonal().mean();
    if (!(scale > 0.0)) scale = 1.0;

    llt.compute(a);
    if (llt.info() == Eigen::Success) return 0.0;

    Eigen::MatrixXd jittered = a;
    double applied = 0.0;
    for (double mult = 1.0e-8; mult <= 1.0e-2 * (1.0 + 1.0e-12); mult *= 10.0) {
        const double jitter = mult * scale;
        jittered.diagonal().array() += jitter - applied;
        applied = jitter;
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) return jitter;
    }
    throw NumericError("ill-conditioned kernel matrix: factorization failed at maximum jitter");
}

double lml_from_factor(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& z) {
    const Eigen::VectorXd alpha = llt.solve(z);
    const double log_det_half = llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * z.dot(alpha) - log_det_half -
           0.5 * static_cast<double>(z.size()) * std::log(kTwoPi);
}

struct HeuristicInit {
    double theta0 = 1.0;
    double theta1 = 1.0;
    double theta2 = 0.0;
    double noise_std = 1.0e-6;
};

HeuristicInit heuristic_init(const PairwiseCache& cache, const Eigen::VectorXd& centered) {
    const Eigen::Index n = centered.size();
    HeuristicInit h;

    const double var = centered.squaredNorm() / static_cast<double>(n);
    h.theta0 = std::max(var, 1.0e-12);

    std::vector<double> offdiag;
    offdiag.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index j = l + 1; j < n; ++j) offdiag.push_back(cache.d2(l, j));
    double med = 1.0;
    if (!offdiag.empty()) {
        const std::size_t mid = offdiag.size() / 2;
        std::nth_element(offdiag.begin(), offdiag.begin() + static_cast<std::ptrdiff_t>(mid),
                         offdiag.end());
        med = offdiag[mid];
    }
    h.theta1 = 1.0 / (2.0 * std::max(med, 1.0e-12));

    const double mean_sq = cache.gram.diagonal().mean();
    h.theta2 = mean_sq > 0.0 ? h.theta0 / mean_sq : 1.0e-12;

    h.noise_std = std::max(0.1 * std::sqrt(var), 1.0e-6);
    return h;
}

// Search-space box in natural-log coordinates; keeps the objective away
// from overflow and degenerate zero-noise regions.
constexpr double kLogThetaMin = -50.0;
constexpr double kLogThetaMax = 50.0;
constexpr double kLogNoiseMin = -13.815510557964274;  // ln(1e-6)
constexpr double kLogNoiseMax = 13.815510557964274;   // ln(1e6)

double box_excess(const Eigen::VectorXd& x) {
    double excess = 0.0;
    for (int i = 0; i < 3; ++i) {
        excess += std::max(0.0, x[i] - kLogThetaMax);
        excess += std::max(0.0, kLogThetaMin - x[i]);
    }
    excess += std::max(0.0, x[3] - kLogNoiseMax);
    excess += std::max(0.0, kLogNoiseMin - x[3]);
    return excess;
}

Eigen::VectorXd clamp_to_box(Eigen::VectorXd x) {
    for (int i = 0; i < 3; ++i) x[i] = std::clamp(x[i], kLogThetaMin, kLogThetaMax);
    x[3] = std::clamp(x[3], kLogNoiseMin, kLogNoiseMax);
    return x;
}

CoordinateModel fit_coordinate(const PairwiseCache& cache, const Eigen::VectorXd& targets,
                               int coordinate, const FitConfig& cfg) {
    const Eigen::Index n = targets.size();
    CoordinateModel model;
    model.target_mean = targets.mean();
    Eigen::VectorXd z = targets.array() - model.target_mean;

    // Constant targets leave nothing to regress; the centering residue is
    // round-off, so it is zeroed and the noise floor keeps the system SPD.
    const double target_std = std::sqrt(z.squaredNorm() / static_cast<double>(n));
    const bool degenerate = target_std <= 1.0e-9 * std::max(1.0, std::abs(model.target_mean));
    if (degenerate) z.setZero();

    KernelParams best;
    double best_noise = 1.0e-6;

    if (cfg.fixed) {
        best = cfg.fixed->kernel;
        best.validate();
        best_noise = std::max(cfg.fixed->noise_std, 1.0e-6);
    } else if (degenerate) {
        // Nothing to learn; any well-conditioned kernel yields alpha = 0.
        const HeuristicInit h = heuristic_init(cache, z);
        best = KernelParams{1.0, h.theta1, 0.0};
        best_noise = 1.0e-6;
    } else {
        const HeuristicInit h = heuristic_init(cache, z);
        Eigen::VectorXd x0(4);
        x0 << std::log(h.theta0), std::log(h.theta1), std::log(std::max(h.theta2, 1.0e-300)),
            std::log(h.noise_std);
        x0 = clamp_to_box(x0);

        Eigen::MatrixXd a;  // reused across objective evaluations
        Eigen::LLT<Eigen::MatrixXd> llt;
        int evals = 0;
        auto objective = [&](const Eigen::VectorXd& x) -> double {
            const double excess = box_excess(x);
            if (excess > 0.0) return 1.0e50 * (1.0 + excess);
            ++evals;
            const KernelParams k{std::exp(x[0]), std::exp(x[1]), std::exp(x[2])};
            const double noise = std::exp(x[3]);
            cache.fill_kernel(k, a);
            a.diagonal().array() += noise * noise;
            try {
                factorize_with_jitter(a, llt);
            } catch (const NumericError&) {
                return 1.0e40;
            }
            return -lml_from_factor(llt, z);
        };

        double best_value = objective(x0);
        Eigen::VectorXd best_x = x0;

        Rng restart_rng(derive_seed(cfg.seed, 0x6d6c6fULL, static_cast<std::uint64_t>(coordinate)));
        std::uniform_real_distribution<double> jolt(-2.0, 2.0);
        for (int r = 0; r <= cfg.random_restarts; ++r) {
            Eigen::VectorXd start = x0;
            if (r > 0) {
                for (int i = 0; i < 4; ++i) start[i] += jolt(restart_rng);
                start = clamp_to_box(start);
            }
            const DirectSearchResult res =
                nelder_mead(objective, start, 0.7, cfg.max_evals, cfg.tolerance);
            if (res.value < best_value) {
                best_value = res.value;
                best_x = res.x;
            }
        }
        if (best_value >= 1.0e40)
            throw NumericError("hyperparameter search failed: kernel ill-conditioned at every start");

        best = KernelParams{std::exp(best_x[0]), std::exp(best_x[1]), std::exp(best_x[2])};
        best_noise = std::exp(best_x[3]);
        model.search_evaluations = evals;
    }

    // Final factorization and prediction weights at the selected parameters.
    Eigen::MatrixXd a;
    cache.fill_kernel(best, a);
    a.diagonal().array() += best_noise * best_noise;
    Eigen::LLT<Eigen::MatrixXd> llt;
    model.jitter = factorize_with_jitter(a, llt);
    model.kernel = best;
    model.noise_std = best_noise;
    model.log_marginal = lml_from_factor(llt, z);
    model.chol_lower = llt.matrixL();
    model.weights = llt.solve(z);
    return model;
}

json coordinate_to_json(const CoordinateModel& c) {
    return json{{"theta0", c.kernel.theta0},
                {"theta1", c.kernel.theta1},
                {"theta2", c.kernel.theta2},
                {"noise_std_m", c.noise_std},
                {"target_mean_m", c.target_mean},
                {"log_marginal", c.log_marginal}};
}

}  // namespace

void KernelParams::validate() const {
    if (theta0 < 0.0 || theta1 < 0.0 || theta2 < 0.0)
        throw ValidationError("kernel hyperparameters must be non-negative");
    if (theta0 == 0.0 && theta1 == 0.0 && theta2 == 0.0)
        throw ValidationError("kernel hyperparameters must not all be zero");
    if (!std::isfinite(theta0) || !std::isfinite(theta1) || !std::isfinite(theta2))
        throw ValidationError("kernel hyperparameters must be finite");
}

void FitConfig::validate() const {
    if (random_restarts < 0) throw ValidationError("random_restarts must be >= 0");
    if (max_evals < 8) throw ValidationError("max_evals must be >= 8");
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    if (fixed) {
        fixed->kernel.validate();
        if (!(fixed->noise_std > 0.0)) throw ValidationError("fixed noise_std must be positive");
    }
}

double kernel_eval(const RssVector& a, const RssVector& b, const KernelParams& k) {
    if (a.size() != b.size())
        throw DimensionError("kernel arguments have lengths " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    return kernel_from_parts((a - b).squaredNorm(), a.dot(b), k);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& inputs, const KernelParams& k) {
    const PairwiseCache cache = PairwiseCache::build(inputs);
    Eigen::MatrixXd out;
    cache.fill_kernel(k, out);
    return out;
}

double log_marginal_likelihood(const TrainingSet& train, int coordinate,
                               const KernelParams& k, double noise_std) {
    train.validate();
    k.validate();
    if (coordinate != 1 && coordinate != 2)
        throw ValidationError("coordinate index must be 1 or 2");
    if (!(noise_std > 0.0)) throw ValidationError("noise std must be positive");

    const Eigen::VectorXd& targets = coordinate == 1 ? train.targets_x1 : train.targets_x2;
    Eigen::VectorXd z = targets.array() - targets.mean();

    Eigen::MatrixXd a = kernel_matrix(train.inputs, k);
    a.diagonal().array() += noise_std * noise_std;
    Eigen::LLT<Eigen::MatrixXd> llt;
    factorize_with_jitter(a, llt);
    return lml_from_factor(llt, z);
}

GprModel fit(const TrainingSet& train, const FitConfig& cfg) {
    train.validate();
    cfg.validate();
    if (train.size() < 2 && !cfg.fixed)
        throw ValidationError("hyperparameter search needs L >= 2; supply fixed hyperparameters");

    const PairwiseCache cache = PairwiseCache::build(train.inputs);

    GprModel model;
    model.training = std::make_shared<TrainingSet>(train);
    model.coord_x1 = fit_coordinate(cache, train.targets_x1, 1, cfg);
    model.coord_x2 = fit_coordinate(cache, train.targets_x2, 2, cfg);
    return model;
}

Prediction predict(const GprModel& model, const RssVector& p) {
    const Eigen::Index n = model.size();
    if (p.size() != model.dimension())
        throw DimensionError("test vector has length " + std::to_string(p.size()) +
                             ", model expects " + std::to_string(model.dimension()));

    const Eigen::MatrixXd& inputs = model.training->inputs;
    Prediction out;
    Eigen::VectorXd c(n), v(n);

    for (int coord = 1; coord <= 2; ++coord) {
        const CoordinateModel& m = model.coordinate(coord);
        for (Eigen::Index l = 0; l < n; ++l) {
            const double d2 = (inputs.row(l).transpose() - p).squaredNorm();
            c[l] = kernel_from_parts(d2, inputs.row(l).dot(p), m.kernel);
        }
        const double mean = m.target_mean + c.dot(m.weights);

        const double kpp = kernel_from_parts(0.0, p.squaredNorm(), m.kernel);
        v = m.chol_lower.triangularView<Eigen::Lower>().solve(c);
        double var = m.noise_std * m.noise_std + kpp - v.squaredNorm();
        if (var < 0.0) {
            if (var < -1.0e-8 * kpp)
                throw NumericError("posterior variance " + std::to_string(var) +
                                   " below the round-off band");
            var = 0.0;
        }

        if (coord == 1) {
            out.mean_x1 = mean;
            out.var_x1 = var;
        } else {
            out.mean_x2 = mean;
            out.var_x2 = var;
        }
    }
    return out;
}

std::string model_to_json(const GprModel& model) {
    json j;
    j["format"] = "mmfp-gpr-model";
    j["version"] = 1;
    j["L"] = model.size();
    j["M"] = model.dimension();
    j["coordinates"] = json::array({coordinate_to_json(model.coord_x1),
                                    coordinate_to_json(model.coord_x2)});

    const TrainingSet& t = *model.training;
    json rows = json::array();
    for (Eigen::Index l = 0; l < t.size(); ++l) {
        json row = json::array();
        for (Eigen::Index m = 0; m < t.dimension(); ++m) row.push_back(t.inputs(l, m));
        rows.push_back(std::move(row));
    }
    j["training"] = {{"inputs", std::move(rows)},
                     {"targets_x1", std::vector<double>(t.targets_x1.begin(), t.targets_x1.end())},
                     {"targets_x2", std::vector<double>(t.targets_x2.begin(), t.targets_x2.end())}};
    return j.dump(2) + "\n";
}

GprModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model parse failure: ") + e.what());
    }
    if (j.value("format", "") != "mmfp-gpr-model")
        throw ValidationError("not a gpr model file");
    if (j.value("version", 0) != 1) throw ValidationError("unsupported model file version");

    const Eigen::Index L = j.at("L").get<Eigen::Index>();
    const Eigen::Index M = j.at("M").get<Eigen::Index>();
    const json& training = j.at("training");
    const json& rows = training.at("inputs");
    if (static_cast<Eigen::Index>(rows.size()) != L)
        throw ValidationError("training input row count does not match L");

    TrainingSet t;
    t.inputs.resize(L, M);
    for (Eigen::Index l = 0; l < L; ++l) {
        const json& row = rows[static_cast<std::size_t>(l)];
        if (static_cast<Eigen::Index>(row.size()) != M)
            throw ValidationError("training input row " + std::to_string(l) +
                                  " does not have M values");
        for (Eigen::Index m = 0; m < M; ++m)
            t.inputs(l, m) = row[static_cast<std::size_t>(m)].get<double>();
    }
    const auto tx1 = training.at("targets_x1").get<std::vector<double>>();
    const auto tx2 = training.at("targets_x2").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(tx1.size()) != L || static_cast<Eigen::Index>(tx2.size()) != L)
        throw ValidationError("training target lengths do not match L");
    t.targets_x1 = Eigen::Map<const Eigen::VectorXd>(tx1.data(), L);
    t.targets_x2 = Eigen::Map<const Eigen::VectorXd>(tx2.data(), L);
    t.validate();

    const json& coords = j.at("coordinates");
    if (!coords.is_array() || coords.size() != 2)
        throw ValidationError("model file must carry exactly two coordinate blocks");

    // Rebuild factors and weights under the stored hyperparameters, then
    // check the recomputed evidence against the stored diagnostic.
    FitConfig cfg;
    GprModel model;
    for (int i = 0; i < 2; ++i) {
        const json& c = coords[static_cast<std::size_t>(i)];
        cfg.fixed = FixedHyperparams{
            KernelParams{c.at("theta0").get<double>(), c.at("theta1").get<double>(),
                         c.at("theta2").get<double>()},
            c.at("noise_std_m").get<double>()};
        cfg.validate();
        const PairwiseCache cache = PairwiseCache::build(t.inputs);
        CoordinateModel rebuilt =
            fit_coordinate(cache, i == 0 ? t.targets_x1 : t.targets_x2, i + 1, cfg);
        const double stored_lml = c.at("log_marginal").get<double>();
        if (std::abs(rebuilt.log_marginal - stored_lml) > 1.0e-6)
            throw NumericError("model file diagnostics mismatch: recomputed evidence " +
                               std::to_string(rebuilt.log_marginal) + " vs stored " +
                               std::to_string(stored_lml));
        if (i == 0)
            model.coord_x1 = std::move(rebuilt);
        else
            model.coord_x2 = std::move(rebuilt);
    }
    model.training = std::make_shared<TrainingSet>(std::move(t));
    return model;
}

void save_model(const GprModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << model_to_json(model);
    if (!out) throw IoError("write failure on '" + path + "'");
}

GprModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace mmfp
