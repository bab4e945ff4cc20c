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
#include <string>
#include <vector>

#include "mmfp/channel.hpp"
#include "mmfp/geometry.hpp"
#include "mmfp/gpr.hpp"
#include "mmfp/knn.hpp"
#include "mmfp/scenario.hpp"
#include "mmfp/training_set.hpp"

namespace mmfp {

inline constexpr const char* kVersion = "0.1.0";

enum class Estimator { gpr, knn, both };
enum class ChannelMode {
    hardened,  // draw RSS directly from the large-scale model
    physical,  // estimate RSS by averaging pilot energy over resource elements
};
enum class TimingMode {
    none,  // wall_s column fixed at 0.000 so result files are reproducible
    wall,  // wall_s column carries measured seconds
};

const char* estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);
const char* channel_mode_name(ChannelMode m);
ChannelMode channel_mode_from_name(const std::string& name);
const char* timing_mode_name(TimingMode m);
TimingMode timing_mode_from_name(const std::string& name);

/// Full description of one Monte-Carlo positioning study: the deployment
/// grid over (layout, M, L), the channel, both estimators, and the seeds.
struct ExperimentConfig {
    double area_width = 100.0;   // meters
    double area_height = 100.0;  // meters
    std::vector<AntennaLayout> layouts{AntennaLayout::spread_grid};
    double compact_fraction = 0.2;
    std::vector<int> antenna_counts{64};      // M values
    int terminal_count = 25;                  // K
    std::vector<int> fingerprint_counts{400}; // L values
    int num_mc_runs = 50;
    Estimator estimator = Estimator::both;
    ChannelMode channel_mode = ChannelMode::hardened;
    PathLossModel path_loss = default_path_loss();
    PhysicalLayerSpec phy;
    KnnConfig knn;
    FitConfig fit = default_fit_budget();
    std::uint64_t master_seed = 1;
    TimingMode timing = TimingMode::none;

    void validate() const;

    /// Three-segment profile exercised by the default studies: flat below
    /// 10 m, exponent 2 to 50 m, exponent 4 beyond; 0 dB reference at 10 m;
    /// 5 dB shadowing.
    static PathLossModel default_path_loss();

    /// Search budget sized for per-run refits inside Monte-Carlo studies
    /// (single heuristic start, capped evaluations). Library callers doing
    /// one-off fits usually want the roomier FitConfig defaults instead.
    static FitConfig default_fit_budget();
};

/// One results-CSV row: one (layout, M, L, estimator) cell.
struct ResultRow {
    AntennaLayout layout = AntennaLayout::spread_grid;
    int antenna_count = 0;      // M
    int fingerprint_count = 0;  // L
    std::string estimator;      // "gpr" or "knn"
    int runs = 0;               // successful Monte-Carlo runs aggregated
    double rmse = 0.0;          // meters
    double rmse_stderr = 0.0;   // meters
    double mean_post_std = std::numeric_limits<double>::quiet_NaN();  // gpr only
    double wall_s = 0.0;
};

double rmse(const std::vector<Position>& estimates, const std::vector<Position>& truths);

/// Everything run_single_trial needs besides the rng: the deployment, the
/// channel, and the fitted/configured estimators.
struct TrialContext {
    const Scenario* scenario = nullptr;
    const PathLossModel* path_loss = nullptr;
    ChannelMode channel_mode = ChannelMode::hardened;
    PhysicalLayerSpec phy;
    const GprModel* gpr = nullptr;          // required when estimator includes gpr
    const TrainingSet* knn_train = nullptr; // required when estimator includes knn
    KnnConfig knn;
};

struct TrialResult {
    std::vector<double> gpr_squared_errors;  // one per located terminal, m^2
    std::vector<double> gpr_posterior_vars;  // var_x1 + var_x2 per terminal, m^2
    std::vector<double> knn_squared_errors;
    int terminals_skipped = 0;  // degenerate geometry (terminal on an antenna)
    long clamp_events = 0;      // physical mode only
};

/// Measures one RSS vector per terminal and locates it with the requested
/// estimator(s). Both estimators see the same measurements. A terminal
/// whose measurement is geometrically degenerate is skipped and counted.
TrialResult run_single_trial(const TrialContext& ctx, Estimator which, Rng& rng);

struct ExperimentOutput {
    std::vector<ResultRow> rows;
    std::string csv_path;       // empty if no file was written
    std::string manifest_path;  // empty if no file was written
};

/// Runs the full (layout, M, L) x estimator grid: per run, fingerprints are
/// redrawn, the GPR model refit, and all terminals located; cells aggregate
/// RMSE with its standard error. Rows come out in config order (layouts,
/// then antenna_counts, then fingerprint_counts, gpr before knn). With a
/// non-empty csv_path, writes the results CSV and a JSON manifest next to
/// it. Identical config + seed give identical rows for any worker count.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::string& csv_path = "",
                                int workers = 1);

std::string results_to_csv(const std::vector<ResultRow>& rows);

/// Strict JSON (de)serialization: every key optional with documented
/// defaults, unknown keys rejected.
std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);
void save_experiment_config(const ExperimentConfig& cfg, const std::string& path);
ExperimentConfig load_experiment_config(const std::string& path);

/// Desk-scale trend study: spread layout, M in {36,100}, K=25,
/// L in {25,100,225,400,625}, 50 runs, 5 dB shadowing.
ExperimentConfig desk_study_config();

/// Full-scale study: spread and compact layouts, M in {36,64,100}, 200 runs.
ExperimentConfig full_study_config();

}  // namespace mmfp
