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

#include "mmfp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "mmfp/rng.hpp"

namespace mmfp {

using nlohmann::json;

namespace {

// Seed stream tags: measurement collection, hyperparameter search, and the
// test-terminal draws. All are keyed by (geometry cell, run) and never by
// estimator, so gpr and knn are evaluated on identical data.
constexpr std::uint64_t kStreamFingerprints = 1;
constexpr std::uint64_t kStreamFit = 2;
constexpr std::uint64_t kStreamTrial = 3;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

RssVector measure(const Position& at, const Scenario& sc, const ExperimentConfig& cfg, Rng& rng,
                  HardeningReport* rep) {
    if (cfg.channel_mode == ChannelMode::hardened) return sample_rss(at, sc, cfg.path_loss, rng);
    return simulate_hardened_rss(at, sc, cfg.path_loss, cfg.phy, rng, rep);
}

struct RunOutcome {
    bool ok = false;
    std::string error;
    ErrorClass error_class = ErrorClass::numeric;
    bool has_gpr = false;
    bool has_knn = false;
    double gpr_mse = 0.0;
    double knn_mse = 0.0;
    double post_std_sum = 0.0;  // sum of sqrt(var_x1 + var_x2) over terminals
    long post_std_count = 0;
    int sites_skipped = 0;
    int terminals_skipped = 0;
    long clamp_events = 0;
    double wall = 0.0;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

RunOutcome run_one(const ExperimentConfig& cfg, const Scenario& sc, std::size_t gcell,
                   int run) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    const bool use_gpr = cfg.estimator != Estimator::knn;
    const bool use_knn = cfg.estimator != Estimator::gpr;
    try {
        HardeningReport rep;
        Rng rng_fp(derive_seed(cfg.master_seed, kStreamFingerprints, gcell,
                               static_cast<std::uint64_t>(run)));
        std::vector<RssVector> rows;
        std::vector<Position> sites;
        rows.reserve(sc.fingerprint_sites.size());
        for (const Position& site : sc.fingerprint_sites) {
            try {
                rows.push_back(measure(site, sc, cfg, rng_fp, &rep));
                sites.push_back(site);
            } catch (const GeometryError&) {
                ++out.sites_skipped;
            }
        }
        if (rows.empty())
            throw GeometryError("every fingerprint site coincides with an antenna");

        TrainingSet train;
        const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
        const Eigen::Index m = rows.front().size();
        train.inputs.resize(n, m);
        train.targets_x1.resize(n);
        train.targets_x2.resize(n);
        for (Eigen::Index l = 0; l < n; ++l) {
            train.inputs.row(l) = rows[static_cast<std::size_t>(l)].transpose();
            train.targets_x1[l] = sites[static_cast<std::size_t>(l)].x1;
            train.targets_x2[l] = sites[static_cast<std::size_t>(l)].x2;
        }

        GprModel model;
        if (use_gpr) {
            FitConfig fc = cfg.fit;
            fc.seed = derive_seed(cfg.master_seed, kStreamFit, gcell,
                                  static_cast<std::uint64_t>(run));
            model = fit(train, fc);
        }

        TrialContext ctx;
        ctx.scenario = &sc;
        ctx.path_loss = &cfg.path_loss;
        ctx.channel_mode = cfg.channel_mode;
        ctx.phy = cfg.phy;
        ctx.gpr = use_gpr ? &model : nullptr;
        ctx.knn_train = use_knn ? &train : nullptr;
        ctx.knn = cfg.knn;

        Rng rng_trial(derive_seed(cfg.master_seed, kStreamTrial, gcell,
                                  static_cast<std::uint64_t>(run)));
        const TrialResult trial = run_single_trial(ctx, cfg.estimator, rng_trial);
        out.terminals_skipped = trial.terminals_skipped;
        out.clamp_events = rep.clamp_events + trial.clamp_events;

        if (use_gpr) {
            if (trial.gpr_squared_errors.empty())
                throw GeometryError("every terminal coincides with an antenna");
            out.has_gpr = true;
            out.gpr_mse = mean_of(trial.gpr_squared_errors);
            for (double v : trial.gpr_posterior_vars) out.post_std_sum += std::sqrt(v);
            out.post_std_count = static_cast<long>(trial.gpr_posterior_vars.size());
        }
        if (use_knn) {
            if (trial.knn_squared_errors.empty())
                throw GeometryError("every terminal coincides with an antenna");
            out.has_knn = true;
            out.knn_mse = mean_of(trial.knn_squared_errors);
        }
        out.ok = true;
    } catch (const Error& e) {
        out.error = e.what();
        out.error_class = e.error_class();
    } catch (const std::exception& e) {
        out.error = e.what();
        out.error_class = ErrorClass::numeric;
    }
    out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string manifest_path_for(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".manifest.json";
    return csv_path + ".manifest.json";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write failure on '" + path + "'");
}

json path_loss_to_json(const PathLossModel& pl) {
    json segs = json::array();
    for (const auto& s : pl.segments) {
        json seg;
        if (std::isinf(s.upper_m))
            seg["upper_m"] = nullptr;
        else
            seg["upper_m"] = s.upper_m;
        seg["exponent"] = s.exponent;
        segs.push_back(std::move(seg));
    }
    return json{{"reference_power_db", pl.reference_power_db},
                {"reference_distance_m", pl.reference_distance_m},
                {"shadowing_std_db", pl.shadowing_std_db},
                {"segments", std::move(segs)}};
}

PathLossModel path_loss_from_json(const json& j) {
    require_keys(j, {"reference_power_db", "reference_distance_m", "shadowing_std_db", "segments"},
                 "path_loss");
    PathLossModel pl = ExperimentConfig::default_path_loss();
    pl.reference_power_db = j.value("reference_power_db", pl.reference_power_db);
    pl.reference_distance_m = j.value("reference_distance_m", pl.reference_distance_m);
    pl.shadowing_std_db = j.value("shadowing_std_db", pl.shadowing_std_db);
    if (j.contains("segments")) {
        pl.segments.clear();
        for (const json& seg : j.at("segments")) {
            require_keys(seg, {"upper_m", "exponent"}, "path_loss.segments");
            PathLossModel::Segment s{};
            s.upper_m = seg.contains("upper_m") && !seg.at("upper_m").is_null()
                            ? seg.at("upper_m").get<double>()
                            : std::numeric_limits<double>::infinity();
            s.exponent = seg.at("exponent").get<double>();
            pl.segments.push_back(s);
        }
    }
    return pl;
}

}  // namespace

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::gpr: return "gpr";
        case Estimator::knn: return "knn";
        case Estimator::both: return "both";
    }
    return "unknown";
}

Estimator estimator_from_name(const std::string& name) {
    if (name == "gpr") return Estimator::gpr;
    if (name == "knn") return Estimator::knn;
    if (name == "both") return Estimator::both;
    throw ValidationError("unknown estimator '" + name + "' (expected gpr, knn, or both)");
}

const char* channel_mode_name(ChannelMode m) {
    return m == ChannelMode::hardened ? "hardened" : "physical";
}

ChannelMode channel_mode_from_name(const std::string& name) {
    if (name == "hardened") return ChannelMode::hardened;
    if (name == "physical") return ChannelMode::physical;
    throw ValidationError("unknown channel mode '" + name + "' (expected hardened or physical)");
}

const char* timing_mode_name(TimingMode m) { return m == TimingMode::none ? "none" : "wall"; }

TimingMode timing_mode_from_name(const std::string& name) {
    if (name == "none") return TimingMode::none;
    if (name == "wall") return TimingMode::wall;
    throw ValidationError("unknown timing mode '" + name + "' (expected none or wall)");
}

PathLossModel ExperimentConfig::default_path_loss() {
    PathLossModel pl;
    pl.reference_power_db = 0.0;
    pl.reference_distance_m = 10.0;
    pl.shadowing_std_db = 5.0;
    pl.segments = {{10.0, 0.0}, {50.0, 2.0}, {std::numeric_limits<double>::infinity(), 4.0}};
    return pl;
}

FitConfig ExperimentConfig::default_fit_budget() {
    FitConfig fc;
    fc.random_restarts = 0;
    fc.max_evals = 40;
    fc.tolerance = 1.0e-4;
    return fc;
}

void ExperimentConfig::validate() const {
    if (!(area_width > 0.0) || !(area_height > 0.0))
        throw ValidationError("experiment area dimensions must be positive");
    if (layouts.empty()) throw ValidationError("layouts list must not be empty");
    for (AntennaLayout l : layouts)
        if (l == AntennaLayout::explicit_list)
            throw ValidationError("experiment layouts must be spread or compact");
    if (!(compact_fraction > 0.0 && compact_fraction <= 1.0))
        throw ValidationError("compact_fraction must lie in (0, 1]");
    if (antenna_counts.empty()) throw ValidationError("antenna_counts must not be empty");
    for (int m : antenna_counts)
        if (m < 1) throw ValidationError("antenna counts must be >= 1");
    if (terminal_count < 1) throw ValidationError("terminal_count must be >= 1");
    if (fingerprint_counts.empty()) throw ValidationError("fingerprint_counts must not be empty");
    for (int l : fingerprint_counts)
        if (l < 1) throw ValidationError("fingerprint counts must be >= 1");
    if (num_mc_runs < 1) throw ValidationError("num_mc_runs must be >= 1");
    path_loss.validate();
    phy.validate();
    knn.validate();
    fit.validate();
}

double rmse(const std::vector<Position>& estimates, const std::vector<Position>& truths) {
    if (estimates.empty()) throw ValidationError("rmse needs at least one estimate");
    if (estimates.size() != truths.size())
        throw DimensionError("rmse got " + std::to_string(estimates.size()) + " estimates and " +
                             std::to_string(truths.size()) + " truths");
    double s = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double dx1 = estimates[i].x1 - truths[i].x1;
        const double dx2 = estimates[i].x2 - truths[i].x2;
        s += dx1 * dx1 + dx2 * dx2;
    }
    return std::sqrt(s / static_cast<double>(estimates.size()));
}

TrialResult run_single_trial(const TrialContext& ctx, Estimator which, Rng& rng) {
    if (ctx.scenario == nullptr || ctx.path_loss == nullptr)
        throw ValidationError("trial context is missing the scenario or the path-loss model");
    const bool use_gpr = which != Estimator::knn;
    const bool use_knn = which != Estimator::gpr;
    if (use_gpr && ctx.gpr == nullptr)
        throw ValidationError("trial context has no fitted gpr model");
    if (use_knn && ctx.knn_train == nullptr)
        throw ValidationError("trial context has no knn training set");

    const Scenario& sc = *ctx.scenario;
    TrialResult out;
    HardeningReport rep;

    // Measure first, locate second: the rng consumption (and therefore the
    // data every estimator sees) is independent of which estimators run.
    std::vector<std::pair<Position, RssVector>> measured;
    measured.reserve(sc.terminals.size());
    for (const Position& mt : sc.terminals) {
        try {
            RssVector rss = ctx.channel_mode == ChannelMode::hardened
                                ? sample_rss(mt, sc, *ctx.path_loss, rng)
                                : simulate_hardened_rss(mt, sc, *ctx.path_loss, ctx.phy, rng, &rep);
            measured.emplace_back(mt, std::move(rss));
        } catch (const GeometryError&) {
            ++out.terminals_skipped;
        }
    }
    out.clamp_events = rep.clamp_events;

    for (const auto& [mt, rss] : measured) {
        if (use_gpr) {
            const Prediction pr = predict(*ctx.gpr, rss);
            const double dx1 = pr.mean_x1 - mt.x1;
            const double dx2 = pr.mean_x2 - mt.x2;
            out.gpr_squared_errors.push_back(dx1 * dx1 + dx2 * dx2);
            out.gpr_posterior_vars.push_back(pr.var_x1 + pr.var_x2);
        }
        if (use_knn) {
            const Position est = knn_locate(*ctx.knn_train, rss, ctx.knn);
            const double dx1 = est.x1 - mt.x1;
            const double dx2 = est.x2 - mt.x2;
            out.knn_squared_errors.push_back(dx1 * dx1 + dx2 * dx2);
        }
    }
    return out;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "layout,M,L,estimator,runs,rmse_m,rmse_stderr_m,mean_post_std_m,wall_s\n";
    for (const ResultRow& r : rows) {
        out << antenna_layout_name(r.layout) << ',' << r.antenna_count << ','
            << r.fingerprint_count << ',' << r.estimator << ',' << r.runs << ','
            << fmt("%.9g", r.rmse) << ',' << fmt("%.9g", r.rmse_stderr) << ','
            << (std::isnan(r.mean_post_std) ? std::string("nan") : fmt("%.9g", r.mean_post_std))
            << ',' << fmt("%.3f", r.wall_s) << '\n';
    }
    return out.str();
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::string& csv_path,
                                int workers) {
    cfg.validate();
    if (workers < 1) throw ValidationError("workers must be >= 1");

    struct GeomCell {
        AntennaLayout layout;
        int antennas;
        int fingerprints;
        Scenario scenario;
    };
    std::vector<GeomCell> cells;
    for (AntennaLayout layout : cfg.layouts)
        for (int m : cfg.antenna_counts)
            for (int l : cfg.fingerprint_counts) {
                DeploymentSpec spec;
                spec.area_width = cfg.area_width;
                spec.area_height = cfg.area_height;
                spec.antenna_layout = layout;
                spec.antenna_count = m;
                spec.terminal_count = cfg.terminal_count;
                spec.fingerprint_count = l;
                spec.compact_fraction = cfg.compact_fraction;
                cells.push_back(GeomCell{layout, m, l, build_scenario(spec)});
            }

    const int runs = cfg.num_mc_runs;
    const std::size_t total = cells.size() * static_cast<std::size_t>(runs);
    std::vector<RunOutcome> outcomes(total);

    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= total) return;
            const std::size_t g = t / static_cast<std::size_t>(runs);
            const int r = static_cast<int>(t % static_cast<std::size_t>(runs));
            outcomes[t] = run_one(cfg, cells[g].scenario, g, r);
        }
    };

    const int pool = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), total));
    if (pool <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int i = 0; i < pool; ++i) threads.emplace_back(work);
        for (auto& th : threads) th.join();
    }

    const bool use_gpr = cfg.estimator != Estimator::knn;
    const bool use_knn = cfg.estimator != Estimator::gpr;

    ExperimentOutput output;
    json manifest_cells = json::array();
    for (std::size_t g = 0; g < cells.size(); ++g) {
        const GeomCell& cell = cells[g];
        const RunOutcome* first = &outcomes[g * static_cast<std::size_t>(runs)];

        int failed = 0;
        const RunOutcome* first_fail = nullptr;
        std::vector<const RunOutcome*> ok;
        double cell_wall = 0.0;
        int sites_skipped = 0;
        long terminals_skipped = 0;
        long clamp_events = 0;
        for (int r = 0; r < runs; ++r) {
            const RunOutcome& o = first[r];
            cell_wall += o.wall;
            terminals_skipped += o.terminals_skipped;
            clamp_events += o.clamp_events;
            if (o.ok) {
                ok.push_back(&o);
                sites_skipped = std::max(sites_skipped, o.sites_skipped);
            } else {
                ++failed;
                if (first_fail == nullptr) first_fail = &o;
            }
        }
        const std::string cell_id = std::string("layout=") + antenna_layout_name(cell.layout) +
                                    " M=" + std::to_string(cell.antennas) +
                                    " L=" + std::to_string(cell.fingerprints);
        if (2 * failed >= runs)
            throw Error(first_fail->error_class,
                        "experiment cell " + cell_id + ": " + std::to_string(failed) + " of " +
                            std::to_string(runs) + " runs failed; first failure: " +
                            first_fail->error);
        if (failed > 0)
            std::cerr << "note: cell " << cell_id << ": " << failed << " of " << runs
                      << " runs failed and were dropped; first failure: " << first_fail->error
                      << "\n";
        if (sites_skipped > 0)
            std::cerr << "note: cell " << cell_id << ": " << sites_skipped
                      << " fingerprint site(s) per run skipped (site on an antenna)\n";
        if (terminals_skipped > 0)
            std::cerr << "note: cell " << cell_id << ": " << terminals_skipped
                      << " terminal measurement(s) skipped (terminal on an antenna)\n";
        if (clamp_events > 0)
            std::cerr << "note: cell " << cell_id << ": " << clamp_events
                      << " gain estimate(s) clamped at the floor\n";

        const int n_ok = static_cast<int>(ok.size());
        auto aggregate = [&](bool gpr_row) {
            ResultRow row;
            row.layout = cell.layout;
            row.antenna_count = cell.antennas;
            row.fingerprint_count = cell.fingerprints;
            row.estimator = gpr_row ? "gpr" : "knn";
            row.runs = n_ok;
            double mse_sum = 0.0;
            for (const RunOutcome* o : ok) mse_sum += gpr_row ? o->gpr_mse : o->knn_mse;
            const double mse_mean = mse_sum / n_ok;
            row.rmse = std::sqrt(mse_mean);
            if (n_ok >= 2 && row.rmse > 0.0) {
                double ss = 0.0;
                for (const RunOutcome* o : ok) {
                    const double d = (gpr_row ? o->gpr_mse : o->knn_mse) - mse_mean;
                    ss += d * d;
                }
                const double sd = std::sqrt(ss / (n_ok - 1));
                row.rmse_stderr = sd / (2.0 * row.rmse * std::sqrt(static_cast<double>(n_ok)));
            }
            if (gpr_row) {
                double s = 0.0;
                long c = 0;
                for (const RunOutcome* o : ok) {
                    s += o->post_std_sum;
                    c += o->post_std_count;
                }
                if (c > 0) row.mean_post_std = s / static_cast<double>(c);
            }
            row.wall_s = cfg.timing == TimingMode::wall ? cell_wall : 0.0;
            output.rows.push_back(std::move(row));
        };
        if (use_gpr) aggregate(true);
        if (use_knn) aggregate(false);

        manifest_cells.push_back(json{{"layout", antenna_layout_name(cell.layout)},
                                      {"M", cell.antennas},
                                      {"L", cell.fingerprints},
                                      {"runs_requested", runs},
                                      {"runs_aggregated", n_ok},
                                      {"fingerprint_sites_skipped_per_run", sites_skipped},
                                      {"terminal_measurements_skipped", terminals_skipped},
                                      {"clamp_events", clamp_events},
                                      {"wall_s", cell_wall}});
    }

    if (!csv_path.empty()) {
        write_text_file(csv_path, results_to_csv(output.rows));
        output.csv_path = csv_path;

        json manifest;
        manifest["format"] = "mmfp-experiment-manifest";
        manifest["code_version"] = kVersion;
        manifest["master_seed"] = cfg.master_seed;
        manifest["workers"] = workers;
        manifest["results_csv"] = csv_path;
        manifest["config"] = json::parse(experiment_config_to_json(cfg));
        manifest["cells"] = std::move(manifest_cells);
        output.manifest_path = manifest_path_for(csv_path);
        write_text_file(output.manifest_path, manifest.dump(2) + "\n");
    }
    return output;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    json layouts = json::array();
    for (AntennaLayout l : cfg.layouts) layouts.push_back(antenna_layout_name(l));
    json j;
    j["area"] = {{"width_m", cfg.area_width}, {"height_m", cfg.area_height}};
    j["layouts"] = std::move(layouts);
    j["compact_fraction"] = cfg.compact_fraction;
    j["antenna_counts"] = cfg.antenna_counts;
    j["terminal_count"] = cfg.terminal_count;
    j["fingerprint_counts"] = cfg.fingerprint_counts;
    j["num_mc_runs"] = cfg.num_mc_runs;
    j["estimator"] = estimator_name(cfg.estimator);
    j["channel_mode"] = channel_mode_name(cfg.channel_mode);
    j["path_loss"] = path_loss_to_json(cfg.path_loss);
    j["phy"] = {{"snr_linear", cfg.phy.snr},
                {"subcarriers", cfg.phy.subcarriers},
                {"symbols", cfg.phy.symbols},
                {"clamp_floor_linear", cfg.phy.clamp_floor_linear}};
    j["knn"] = {{"kappa", cfg.knn.kappa},
                {"zero_distance_epsilon", cfg.knn.zero_distance_epsilon}};
    j["fit"] = {{"random_restarts", cfg.fit.random_restarts},
                {"max_evals", cfg.fit.max_evals},
                {"tolerance", cfg.fit.tolerance}};
    j["master_seed"] = cfg.master_seed;
    j["timing"] = timing_mode_name(cfg.timing);
    return j.dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    try {
        require_keys(j,
                     {"area", "layouts", "compact_fraction", "antenna_counts", "terminal_count",
                      "fingerprint_counts", "num_mc_runs", "estimator", "channel_mode",
                      "path_loss", "phy", "knn", "fit", "master_seed", "timing"},
                     "config");
        ExperimentConfig cfg;
        if (j.contains("area")) {
            const json& a = j.at("area");
            require_keys(a, {"width_m", "height_m"}, "area");
            cfg.area_width = a.value("width_m", cfg.area_width);
            cfg.area_height = a.value("height_m", cfg.area_height);
        }
        if (j.contains("layouts")) {
            cfg.layouts.clear();
            for (const json& name : j.at("layouts"))
                cfg.layouts.push_back(antenna_layout_from_name(name.get<std::string>()));
        }
        cfg.compact_fraction = j.value("compact_fraction", cfg.compact_fraction);
        if (j.contains("antenna_counts"))
            cfg.antenna_counts = j.at("antenna_counts").get<std::vector<int>>();
        cfg.terminal_count = j.value("terminal_count", cfg.terminal_count);
        if (j.contains("fingerprint_counts"))
            cfg.fingerprint_counts = j.at("fingerprint_counts").get<std::vector<int>>();
        cfg.num_mc_runs = j.value("num_mc_runs", cfg.num_mc_runs);
        if (j.contains("estimator"))
            cfg.estimator = estimator_from_name(j.at("estimator").get<std::string>());
        if (j.contains("channel_mode"))
            cfg.channel_mode = channel_mode_from_name(j.at("channel_mode").get<std::string>());
        if (j.contains("path_loss")) cfg.path_loss = path_loss_from_json(j.at("path_loss"));
        if (j.contains("phy")) {
            const json& p = j.at("phy");
            require_keys(p, {"snr_linear", "subcarriers", "symbols", "clamp_floor_linear"}, "phy");
            cfg.phy.snr = p.value("snr_linear", cfg.phy.snr);
            cfg.phy.subcarriers = p.value("subcarriers", cfg.phy.subcarriers);
            cfg.phy.symbols = p.value("symbols", cfg.phy.symbols);
            cfg.phy.clamp_floor_linear = p.value("clamp_floor_linear", cfg.phy.clamp_floor_linear);
        }
        if (j.contains("knn")) {
            const json& k = j.at("knn");
            require_keys(k, {"kappa", "zero_distance_epsilon"}, "knn");
            cfg.knn.kappa = k.value("kappa", cfg.knn.kappa);
            cfg.knn.zero_distance_epsilon =
                k.value("zero_distance_epsilon", cfg.knn.zero_distance_epsilon);
        }
        if (j.contains("fit")) {
            const json& f = j.at("fit");
            require_keys(f, {"random_restarts", "max_evals", "tolerance"}, "fit");
            cfg.fit.random_restarts = f.value("random_restarts", cfg.fit.random_restarts);
            cfg.fit.max_evals = f.value("max_evals", cfg.fit.max_evals);
            cfg.fit.tolerance = f.value("tolerance", cfg.fit.tolerance);
        }
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("timing"))
            cfg.timing = timing_mode_from_name(j.at("timing").get<std::string>());
        cfg.validate();
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

void save_experiment_config(const ExperimentConfig& cfg, const std::string& path) {
    write_text_file(path, experiment_config_to_json(cfg));
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return experiment_config_from_json(buf.str());
}

ExperimentConfig desk_study_config() {
    ExperimentConfig cfg;
    cfg.layouts = {AntennaLayout::spread_grid};
    cfg.antenna_counts = {36, 100};
    cfg.fingerprint_counts = {25, 100, 225, 400, 625};
    cfg.terminal_count = 25;
    cfg.num_mc_runs = 50;
    cfg.estimator = Estimator::both;
    cfg.master_seed = 1;
    return cfg;
}

ExperimentConfig full_study_config() {
    ExperimentConfig cfg = desk_study_config();
    cfg.layouts = {AntennaLayout::spread_grid, AntennaLayout::compact_grid};
    cfg.antenna_counts = {36, 64, 100};
    cfg.num_mc_runs = 200;
    return cfg;
}

}  // namespace mmfp
