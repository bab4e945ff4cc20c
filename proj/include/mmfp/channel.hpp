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

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "mmfp/geometry.hpp"
#include "mmfp/rng.hpp"
#include "mmfp/scenario.hpp"

namespace mmfp {

/// Per-antenna received signal strength in dB; entry order matches
/// Scenario::antennas.
using RssVector = Eigen::VectorXd;

/// Multi-slope log-distance path-loss model. The first segment is anchored
/// at reference_power_db at reference_distance_m; each later segment is
/// anchored at the previous segment's endpoint value, so the mean gain is
/// continuous across breakpoints.
struct PathLossModel {
    struct Segment {
        double upper_m;   // upper breakpoint (meters); infinity for the last
        double exponent;  // path-loss exponent for this segment
    };

    double reference_power_db = 0.0;
    double reference_distance_m = 10.0;
    std::vector<Segment> segments;   // breakpoints strictly increasing; last upper = inf
    double shadowing_std_db = 0.0;   // sigma of the dB-domain shadowing term

    void validate() const;
};

/// Uplink pilot parameters for the physical-layer mode. One resource element
/// is one (subcarrier, symbol) pair; the RSS estimate averages over all
/// N_c = subcarriers * symbols of them.
struct PhysicalLayerSpec {
    double snr = 1.0e6;  // linear transmit SNR (rho)
    int subcarriers = 100;
    int symbols = 7;
    double clamp_floor_linear = 1.0e-12;  // floor applied to the estimated gain

    long resource_elements() const { return static_cast<long>(subcarriers) * symbols; }
    void validate() const;
};

/// Impairment switches for the physical-layer simulation. Production use
/// keeps both enabled; tests disable them to pin the estimator algebra.
struct PhyImpairments {
    bool small_scale_fading = true;  // h ~ CN(0,1); off: h = 1
    bool thermal_noise = true;       // w ~ CN(0,1); off: w = 0 and no bias removal
};

/// Counters surfaced from the hardening estimator.
struct HardeningReport {
    long clamp_events = 0;
};

/// Mean large-scale gain in dB at distance d > 0.
double mean_path_gain_db(double d, const PathLossModel& model);

/// One RSS measurement per antenna: mean path gain plus i.i.d. Gaussian
/// shadowing, drawn fresh per antenna per call. Rejects a terminal placed
/// exactly on an antenna.
RssVector sample_rss(const Position& mt, const Scenario& scenario,
                     const PathLossModel& model, Rng& rng);

/// Physical-layer RSS measurement: per antenna, draws shadowing once, then
/// averages the received pilot energy over all resource elements, removes
/// the unit noise power, rescales by the SNR, clamps at the configured
/// floor, and converts to dB. Converges to sample_rss as the number of
/// resource elements grows.
RssVector simulate_hardened_rss(const Position& mt, const Scenario& scenario,
                                const PathLossModel& model, const PhysicalLayerSpec& phy,
                                Rng& rng, HardeningReport* report = nullptr,
                                const PhyImpairments& impairments = {});

}  // namespace mmfp
