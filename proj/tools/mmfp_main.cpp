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
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmfp/experiment.hpp"
#include "mmfp/fingerprint_io.hpp"
#include "mmfp/gpr.hpp"
#include "mmfp/knn.hpp"
#include "mmfp/rng.hpp"
#include "mmfp/scenario.hpp"

namespace {

using namespace mmfp;

std::string g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<double> parse_rss_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string field =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &consumed);
        } catch (const std::exception&) {
            throw ValidationError("rss entry '" + field + "' is not a number");
        }
        if (consumed != field.size())
            throw ValidationError("rss entry '" + field + "' has trailing characters");
        values.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw ValidationError("rss list is empty");
    return values;
}

struct GenerateArgs {
    std::string preset;
    std::string out_dir = ".";
    std::string layout = "spread";
    int antennas = 64;
    int terminals = 25;
    int fingerprints = 400;
    double area_width = 100.0;
    double area_height = 100.0;
    double compact_fraction = 0.2;
    double shadowing_std = 5.0;
    std::uint64_t seed = 1;
};

int run_generate(const GenerateArgs& a) {
    if (!a.preset.empty()) {
        // Study configuration pair: desk-scale for quick trend checks, full
        // scale for the complete grid.
        ExperimentConfig desk = desk_study_config();
        ExperimentConfig full = full_study_config();
        desk.master_seed = a.seed;
        full.master_seed = a.seed;
        const std::string desk_path = a.out_dir + "/study_desk.json";
        const std::string full_path = a.out_dir + "/study_full.json";
        save_experiment_config(desk, desk_path);
        save_experiment_config(full, full_path);
        std::cerr << "wrote " << desk_path << " (spread, M {36,100}, 50 runs)\n";
        std::cerr << "wrote " << full_path << " (spread+compact, M {36,64,100}, 200 runs)\n";
        return 0;
    }

    DeploymentSpec spec;
    spec.area_width = a.area_width;
    spec.area_height = a.area_height;
    spec.antenna_layout = antenna_layout_from_name(a.layout);
    spec.antenna_count = a.antennas;
    spec.terminal_count = a.terminals;
    spec.fingerprint_count = a.fingerprints;
    spec.compact_fraction = a.compact_fraction;
    const Scenario sc = build_scenario(spec);

    PathLossModel pl = ExperimentConfig::default_path_loss();
    pl.shadowing_std_db = a.shadowing_std;

    Rng rng(derive_seed(a.seed, 1));
    TrainingSet train;
    train.inputs.resize(spec.fingerprint_count, spec.antenna_count);
    train.targets_x1.resize(spec.fingerprint_count);
    train.targets_x2.resize(spec.fingerprint_count);
    for (Eigen::Index l = 0; l < train.size(); ++l) {
        const Position& site = sc.fingerprint_sites[static_cast<std::size_t>(l)];
        train.inputs.row(l) = sample_rss(site, sc, pl, rng).transpose();
        train.targets_x1[l] = site.x1;
        train.targets_x2[l] = site.x2;
    }

    const std::string scenario_path = a.out_dir + "/scenario.json";
    const std::string fp_path = a.out_dir + "/fingerprints.csv";
    save_scenario(sc, scenario_path);
    save_fingerprints(train, fp_path);
    std::cerr << "wrote " << scenario_path << " and " << fp_path << "\n";
    return 0;
}

struct FitArgs {
    std::string fingerprints;
    std::string out;
    std::uint64_t seed = 1;
    int restarts = 5;
    int max_evals = 200;
    double tolerance = 1.0e-6;
};

int run_fit(const FitArgs& a) {
    const TrainingSet train = load_fingerprints(a.fingerprints);
    FitConfig cfg;
    cfg.random_restarts = a.restarts;
    cfg.max_evals = a.max_evals;
    cfg.tolerance = a.tolerance;
    cfg.seed = a.seed;
    const GprModel model = fit(train, cfg);
    save_model(model, a.out);
    for (int i = 1; i <= 2; ++i) {
        const CoordinateModel& c = model.coordinate(i);
        std::cerr << "coordinate x" << i << ": theta0=" << g9(c.kernel.theta0)
                  << " theta1=" << g9(c.kernel.theta1) << " theta2=" << g9(c.kernel.theta2)
                  << " noise_std=" << g9(c.noise_std) << " log_marginal=" << g9(c.log_marginal)
                  << " evals=" << c.search_evaluations << "\n";
    }
    std::cerr << "wrote " << a.out << "\n";
    return 0;
}

struct LocateArgs {
    std::string model;
    std::string rss;
};

int run_locate(const LocateArgs& a) {
    const GprModel model = load_model(a.model);
    const std::vector<double> values = parse_rss_list(a.rss);
    RssVector p = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                    static_cast<Eigen::Index>(values.size()));
    const Prediction pr = predict(model, p);
    std::cout << "x1_m,x2_m,post_std_x1_m,post_std_x2_m\n"
              << g9(pr.mean_x1) << ',' << g9(pr.mean_x2) << ',' << g9(std::sqrt(pr.var_x1)) << ','
              << g9(std::sqrt(pr.var_x2)) << "\n";
    return 0;
}

struct ExperimentArgs {
    std::string config;
    std::string out;
    std::int64_t seed = -1;  // <0: keep the config's master_seed
    int workers = 1;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    ExperimentConfig cfg = load_experiment_config(a.config);
    if (a.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(a.seed);
    const ExperimentOutput out = run_experiment(cfg, a.out, a.workers);
    std::cerr << "wrote " << out.csv_path << " (" << out.rows.size() << " rows) and "
              << out.manifest_path << "\n";
    return 0;
}

struct SweepArgs {
    std::string fingerprints;
    double holdout_fraction = 0.2;
    int kappa_max = 10;
    std::uint64_t seed = 1;
};

int run_sweep_knn(const SweepArgs& a) {
    if (!(a.holdout_fraction > 0.0 && a.holdout_fraction < 1.0))
        throw ValidationError("holdout fraction must lie in (0, 1)");
    if (a.kappa_max < 1) throw ValidationError("kappa-max must be >= 1");
    const TrainingSet all = load_fingerprints(a.fingerprints);
    const Eigen::Index n = all.size();
    const Eigen::Index n_holdout =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(
                                      a.holdout_fraction * static_cast<double>(n))));
    if (n - n_holdout < 1)
        throw ValidationError("holdout leaves no training fingerprints");

    const std::vector<std::size_t> order =
        shuffled_indices(static_cast<std::size_t>(n), derive_seed(a.seed, 4));
    TrainingSet train;
    train.inputs.resize(n - n_holdout, all.dimension());
    train.targets_x1.resize(n - n_holdout);
    train.targets_x2.resize(n - n_holdout);
    for (Eigen::Index i = 0; i < n - n_holdout; ++i) {
        const Eigen::Index src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
        train.inputs.row(i) = all.inputs.row(src);
        train.targets_x1[i] = all.targets_x1[src];
        train.targets_x2[i] = all.targets_x2[src];
    }

    std::cout << "kappa,rmse_m\n";
    int best_kappa = 0;
    double best_rmse = 0.0;
    const int kappa_limit = static_cast<int>(std::min<Eigen::Index>(a.kappa_max, train.size()));
    for (int kappa = 1; kappa <= kappa_limit; ++kappa) {
        KnnConfig cfg;
        cfg.kappa = kappa;
        std::vector<Position> est, truth;
        for (Eigen::Index i = n - n_holdout; i < n; ++i) {
            const Eigen::Index src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
            est.push_back(knn_locate(train, all.inputs.row(src).transpose(), cfg));
            truth.push_back(all.position(src));
        }
        const double r = rmse(est, truth);
        std::cout << kappa << ',' << g9(r) << "\n";
        if (best_kappa == 0 || r < best_rmse) {
            best_kappa = kappa;
            best_rmse = r;
        }
    }
    std::cerr << "best kappa=" << best_kappa << " rmse_m=" << g9(best_rmse) << " (holdout "
              << n_holdout << " of " << n << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RSS-fingerprinting positioning toolkit for distributed massive MIMO"};
    app.set_version_flag("--version", std::string("mmfp ") + kVersion);
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand(
        "generate", "Write a scenario plus one fingerprint draw, or preset study configs");
    generate->add_option("--preset", gen.preset, "Named study preset")
        ->check(CLI::IsMember({"paper-fig2"}));
    generate->add_option("--out-dir", gen.out_dir, "Output directory (default .)");
    generate->add_option("--layout", gen.layout, "Antenna layout: spread or compact")
        ->check(CLI::IsMember({"spread", "compact"}));
    generate->add_option("--antennas", gen.antennas, "Antenna count M");
    generate->add_option("--terminals", gen.terminals, "Terminal count K");
    generate->add_option("--fingerprints", gen.fingerprints, "Fingerprint count L");
    generate->add_option("--area-width", gen.area_width, "Area width in meters");
    generate->add_option("--area-height", gen.area_height, "Area height in meters");
    generate->add_option("--compact-fraction", gen.compact_fraction,
                         "Side fraction of the compact antenna square");
    generate->add_option("--shadowing-std", gen.shadowing_std, "Shadowing std in dB");
    generate->add_option("--seed", gen.seed, "Master seed");

    FitArgs fit_args;
    CLI::App* fit_cmd =
        app.add_subcommand("fit", "Fit a positioning model from a fingerprint CSV");
    fit_cmd->add_option("--fingerprints", fit_args.fingerprints, "Fingerprint CSV path")
        ->required();
    fit_cmd->add_option("--out", fit_args.out, "Model file to write")->required();
    fit_cmd->add_option("--seed", fit_args.seed, "Hyperparameter search seed");
    fit_cmd->add_option("--restarts", fit_args.restarts, "Random search restarts");
    fit_cmd->add_option("--max-evals", fit_args.max_evals, "Objective evaluations per start");
    fit_cmd->add_option("--tolerance", fit_args.tolerance, "Search stopping tolerance");

    LocateArgs loc;
    CLI::App* locate =
        app.add_subcommand("locate", "Locate one RSS vector with a fitted model");
    locate->add_option("--model", loc.model, "Model file from `fit`")->required();
    locate->add_option("--rss", loc.rss, "Comma-separated RSS values in dB, one per antenna")
        ->required();

    ExperimentArgs exp;
    CLI::App* experiment =
        app.add_subcommand("experiment", "Run a Monte-Carlo study from a config file");
    experiment->add_option("--config", exp.config, "Experiment config (JSON)")->required();
    experiment->add_option("--out", exp.out, "Results CSV path")->required();
    experiment->add_option("--seed", exp.seed, "Override the config's master seed");
    experiment->add_option("--workers", exp.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep-knn", "Sweep kappa on a holdout split of a fingerprint CSV");
    sweep_cmd->add_option("--fingerprints", sweep.fingerprints, "Fingerprint CSV path")
        ->required();
    sweep_cmd->add_option("--holdout-fraction", sweep.holdout_fraction,
                          "Fraction of fingerprints held out for validation");
    sweep_cmd->add_option("--kappa-max", sweep.kappa_max, "Largest kappa to try");
    sweep_cmd->add_option("--seed", sweep.seed, "Split seed");

    try {
        app.parse(argc, argv);
        if (generate->parsed()) return run_generate(gen);
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (locate->parsed()) return run_locate(loc);
        if (experiment->parsed()) return run_experiment_cmd(exp);
        if (sweep_cmd->parsed()) return run_sweep_knn(sweep);
        std::cerr << "error: usage: no subcommand given\n";
        return mmfp::error_class_exit_code(ErrorClass::usage);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return mmfp::error_class_exit_code(ErrorClass::usage);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return error_class_exit_code(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
