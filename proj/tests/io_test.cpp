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
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <doctest.h>

#include "mmfp/experiment.hpp"
#include "mmfp/fingerprint_io.hpp"
#include "mmfp/rng.hpp"

using namespace mmfp;

namespace {

TrainingSet random_fingerprints(Rng& rng, Eigen::Index L, Eigen::Index M) {
    std::normal_distribution<double> rss(-40.0, 9.0);
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

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string what_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("fingerprint csv: save, load, re-save is byte identical") {
    Rng rng(41);
    const TrainingSet t = random_fingerprints(rng, 37, 9);
    TempFile a("fp_roundtrip_a.csv"), b("fp_roundtrip_b.csv");
    save_fingerprints(t, a.path);
    const TrainingSet back = load_fingerprints(a.path);
    save_fingerprints(back, b.path);
    CHECK(read_text(a.path) == read_text(b.path));
    CHECK(back.size() == 37);
    CHECK(back.dimension() == 9);
}

TEST_CASE("fingerprint csv: large grid loads intact") {
    Rng rng(42);
    const TrainingSet t = random_fingerprints(rng, 625, 100);
    TempFile f("fp_large.csv");
    save_fingerprints(t, f.path);
    const TrainingSet back = load_fingerprints(f.path);
    CHECK(back.size() == 625);
    CHECK(back.dimension() == 100);
    CHECK((back.inputs - t.inputs).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.targets_x1 - t.targets_x1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fingerprint csv: tolerates CRLF line endings") {
    TempFile f("fp_crlf.csv");
    write_text(f.path, "x1,x2,rss_0\r\n1.5,2.5,-31.0\r\n3.5,4.5,-29.0\r\n");
    const TrainingSet t = load_fingerprints(f.path);
    CHECK(t.size() == 2);
    CHECK(t.targets_x1[1] == 3.5);
    CHECK(t.inputs(0, 0) == -31.0);
}

TEST_CASE("fingerprint csv: malformed files raise IoError naming the spot") {
    TempFile f("fp_bad.csv");

    write_text(f.path, "");
    CHECK_THROWS_AS(load_fingerprints(f.path), IoError);
    CHECK(what_of([&] { load_fingerprints(f.path); }).find("is empty") != std::string::npos);

    write_text(f.path, "x1,x2,rss_0\n");
    CHECK(what_of([&] { load_fingerprints(f.path); }).find("holds no fingerprints") !=
          std::string::npos);

    write_text(f.path, "x1,x2,rss_0\n1.0,2.0,-30.0\n1.0,2.0\n");
    CHECK(what_of([&] { load_fingerprints(f.path); }).find("line 3: expected 3 fields, found 2") !=
          std::string::npos);

    write_text(f.path, "x1,x2,rss_0\n1.0,oops,-30.0\n");
    CHECK(what_of([&] { load_fingerprints(f.path); })
              .find("line 2, column 2: 'oops' is not a number") != std::string::npos);

    write_text(f.path, "x1,x2,rss_0\n1.0,2.0,-30.0xyz\n");
    CHECK(what_of([&] { load_fingerprints(f.path); }).find("trailing characters") !=
          std::string::npos);

    write_text(f.path, "x1,x2,gain_0\n1.0,2.0,-30.0\n");
    CHECK(what_of([&] { load_fingerprints(f.path); }).find("must be rss_0") != std::string::npos);

    write_text(f.path, "a,b,c\n1.0,2.0,-30.0\n");
    CHECK(what_of([&] { load_fingerprints(f.path); }).find("must start with x1,x2,rss_0") !=
          std::string::npos);

    CHECK_THROWS_AS(load_fingerprints("definitely_missing_file.csv"), IoError);
}

TEST_CASE("experiment config: empty object yields the documented defaults") {
    const ExperimentConfig cfg = experiment_config_from_json("{}");
    CHECK(cfg.area_width == 100.0);
    CHECK(cfg.area_height == 100.0);
    REQUIRE(cfg.layouts.size() == 1);
    CHECK(cfg.layouts[0] == AntennaLayout::spread_grid);
    CHECK(cfg.antenna_counts == std::vector<int>{64});
    CHECK(cfg.terminal_count == 25);
    CHECK(cfg.fingerprint_counts == std::vector<int>{400});
    CHECK(cfg.num_mc_runs == 50);
    CHECK(cfg.estimator == Estimator::both);
    CHECK(cfg.channel_mode == ChannelMode::hardened);
    CHECK(cfg.path_loss.segments.size() == 3);
    CHECK(cfg.path_loss.shadowing_std_db == 5.0);
    CHECK(cfg.knn.kappa == 4);
    CHECK(cfg.master_seed == 1);
    CHECK(cfg.timing == TimingMode::none);
}

TEST_CASE("experiment config: round trip preserves every field") {
    ExperimentConfig cfg;
    cfg.layouts = {AntennaLayout::compact_grid, AntennaLayout::spread_grid};
    cfg.compact_fraction = 0.25;
    cfg.antenna_counts = {36, 100};
    cfg.terminal_count = 16;
    cfg.fingerprint_counts = {25, 225};
    cfg.num_mc_runs = 7;
    cfg.estimator = Estimator::gpr;
    cfg.channel_mode = ChannelMode::physical;
    cfg.path_loss.shadowing_std_db = 3.5;
    cfg.phy.snr = 2.5e4;
    cfg.phy.subcarriers = 12;
    cfg.phy.symbols = 2;
    cfg.knn.kappa = 3;
    cfg.fit.max_evals = 25;
    cfg.fit.tolerance = 1e-3;
    cfg.master_seed = 999;
    cfg.timing = TimingMode::wall;

    const ExperimentConfig back = experiment_config_from_json(experiment_config_to_json(cfg));
    CHECK(back.layouts == cfg.layouts);
    CHECK(back.compact_fraction == cfg.compact_fraction);
    CHECK(back.antenna_counts == cfg.antenna_counts);
    CHECK(back.terminal_count == cfg.terminal_count);
    CHECK(back.fingerprint_counts == cfg.fingerprint_counts);
    CHECK(back.num_mc_runs == cfg.num_mc_runs);
    CHECK(back.estimator == cfg.estimator);
    CHECK(back.channel_mode == cfg.channel_mode);
    CHECK(back.path_loss.shadowing_std_db == 3.5);
    CHECK(back.phy.snr == 2.5e4);
    CHECK(back.phy.subcarriers == 12);
    CHECK(back.knn.kappa == 3);
    CHECK(back.fit.max_evals == 25);
    CHECK(back.fit.tolerance == 1e-3);
    CHECK(back.master_seed == 999);
    CHECK(back.timing == TimingMode::wall);
}

TEST_CASE("experiment config: unknown keys are rejected at every level") {
    CHECK_THROWS_AS(experiment_config_from_json("{\"bogus\": 1}"), ConfigError);
    CHECK_THROWS_AS(experiment_config_from_json("{\"area\": {\"width_m\": 50, \"depth_m\": 2}}"),
                    ConfigError);
    CHECK_THROWS_AS(experiment_config_from_json("{\"knn\": {\"kappa\": 2, \"metric\": \"l1\"}}"),
                    ConfigError);
    CHECK_THROWS_AS(
        experiment_config_from_json(
            "{\"path_loss\": {\"segments\": [{\"upper_m\": null, \"exponent\": 2, \"slope\": 1}]}}"),
        ConfigError);
    CHECK_THROWS_AS(experiment_config_from_json("not json at all"), ConfigError);
}

TEST_CASE("experiment config: null segment bound means unbounded") {
    const std::string text =
        "{\"path_loss\": {\"segments\": ["
        "{\"upper_m\": 10, \"exponent\": 0},"
        "{\"upper_m\": null, \"exponent\": 4}]}}";
    const ExperimentConfig cfg = experiment_config_from_json(text);
    REQUIRE(cfg.path_loss.segments.size() == 2);
    CHECK(cfg.path_loss.segments[0].upper_m == 10.0);
    CHECK(std::isinf(cfg.path_loss.segments[1].upper_m));
    CHECK(cfg.path_loss.segments[1].exponent == 4.0);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("experiment config: file round trip and validation") {
    TempFile f("cfg_roundtrip.json");
    const ExperimentConfig cfg = desk_study_config();
    save_experiment_config(cfg, f.path);
    const ExperimentConfig back = load_experiment_config(f.path);
    CHECK(back.antenna_counts == cfg.antenna_counts);
    CHECK(back.fingerprint_counts == cfg.fingerprint_counts);
    CHECK(back.num_mc_runs == cfg.num_mc_runs);

    ExperimentConfig bad = cfg;
    bad.layouts = {AntennaLayout::explicit_list};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = cfg;
    bad.num_mc_runs = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}
