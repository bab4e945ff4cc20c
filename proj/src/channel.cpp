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

#include "mmfp/channel.hpp"

#include <cmath>
#include <complex>

namespace mmfp {

void PathLossModel::validate() const {
    if (!(reference_distance_m > 0.0))
        throw ValidationError("path-loss reference distance must be positive");
    if (segments.empty()) throw ValidationError("path-loss model needs at least one segment");
    double prev = 0.0;
    int infinite = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment& s = segments[i];
        if (s.exponent < 0.0 || s.exponent > 6.0)
            throw ValidationError("path-loss exponent must lie in [0, 6]");
        if (std::isinf(s.upper_m)) {
            ++infinite;
            if (i + 1 != segments.size())
                throw ValidationError("only the last segment may extend to infinity");
        } else {
            if (!(s.upper_m > prev))
                throw ValidationError("path-loss breakpoints must be strictly increasing");
            prev = s.upper_m;
        }
    }
    if (infinite != 1)
        throw ValidationError("exactly one segment must have an infinite upper breakpoint");
    if (shadowing_std_db < 0.0) throw ValidationError("shadowing std must be >= 0");
}

void PhysicalLayerSpec::validate() const {
    if (!(snr > 0.0)) throw ValidationError("snr must be positive");
    if (subcarriers < 1) throw ValidationError("subcarriers must be >= 1");
    if (symbols < 1) throw ValidationError("symbols must be >= 1");
    if (!(clamp_floor_linear > 0.0)) throw ValidationError("clamp floor must be positive");
}

double mean_path_gain_db(double d, const PathLossModel& model) {
    if (!(d > 0.0)) throw ValidationError("distance must be positive");

    // Walk the segments, carrying the value at each segment's start so the
    // curve stays continuous. The first segment is anchored at the reference
    // distance.
    double seg_start = model.reference_distance_m;
    double value_at_start = model.reference_power_db;
    for (const PathLossModel::Segment& s : model.segments) {
        if (d <= s.upper_m) {
            return value_at_start - 10.0 * s.exponent * std::log10(d / seg_start);
        }
        value_at_start -= 10.0 * s.exponent * std::log10(s.upper_m / seg_start);
        seg_start = s.upper_m;
    }
    // validate() guarantees the last segment is unbounded.
    throw ValidationError("path-loss model has no unbounded segment");
}

RssVector sample_rss(const Position& mt, const Scenario& scenario,
                     const PathLossModel& model, Rng& rng) {
    const std::size_t m_count = scenario.antennas.size();
    RssVector rss(static_cast<Eigen::Index>(m_count));
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t m = 0; m < m_count; ++m) {
        const double d = distance(mt, scenario.antennas[m]);
        if (!(d > 0.0))
            throw GeometryError("terminal coincides with antenna " + std::to_string(m));
        const double shadow = model.shadowing_std_db * unit(rng);
        rss[static_cast<Eigen::Index>(m)] = mean_path_gain_db(d, model) + shadow;
    }
    return rss;
}

RssVector simulate_hardened_rss(const Position& mt, const Scenario& scenario,
                                const PathLossModel& model, const PhysicalLayerSpec& phy,
                                Rng& rng, HardeningReport* report,
                                const PhyImpairments& impairments) {
    phy.validate();
    const std::size_t m_count = scenario.antennas.size();
    const long n_re = phy.resource_elements();
    const double rho = phy.snr;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    RssVector rss(static_cast<Eigen::Index>(m_count));
    std::normal_distribution<double> unit(0.0, 1.0);

    for (std::size_t m = 0; m < m_count; ++m) {
        const double d = distance(mt, scenario.antennas[m]);
        if (!(d > 0.0))
            throw GeometryError("terminal coincides with antenna " + std::to_string(m));

        // Large-scale gain is drawn once per antenna per measurement; only
        // the small-scale terms vary across resource elements.
        const double shadow = model.shadowing_std_db * unit(rng);
        const double gain_db = mean_path_gain_db(d, model) + shadow;
        const double beta = std::pow(10.0, gain_db / 10.0);
        const double amp = std::sqrt(rho * beta);

        double energy_sum = 0.0;
        for (long n = 0; n < n_re; ++n) {
            std::complex<double> h(1.0, 0.0);
            if (impairments.small_scale_fading)
                h = std::complex<double>(unit(rng) * inv_sqrt2, unit(rng) * inv_sqrt2);
            std::complex<double> w(0.0, 0.0);
            if (impairments.thermal_noise)
                w = std::complex<double>(unit(rng) * inv_sqrt2, unit(rng) * inv_sqrt2);
            energy_sum += std::norm(amp * h + w);
        }

        // E|y|^2 = rho*beta + 1, so removing the unit noise power makes the
        // estimate unbiased; without noise there is nothing to remove.
        const double noise_power = impairments.thermal_noise ? 1.0 : 0.0;
        double beta_hat = (energy_sum / static_cast<double>(n_re) - noise_power) / rho;
        if (beta_hat < phy.clamp_floor_linear) {
            beta_hat = phy.clamp_floor_linear;
            if (report) ++report->clamp_events;
        }
        rss[static_cast<Eigen::Index>(m)] = 10.0 * std::log10(beta_hat);
    }
    return rss;
}

}  // namespace mmfp
