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

#include "mmfp/geometry.hpp"

namespace mmfp {

enum class AntennaLayout {
    compact_grid,  // grid inside a centered sub-square of the area
    spread_grid,   // grid over the full area
    explicit_list, // caller-provided antenna positions
};

const char* antenna_layout_name(AntennaLayout l);
AntennaLayout antenna_layout_from_name(const std::string& name);

/// Deployment geometry request: rectangular area, BS antenna layout, and the
/// sizes of the antenna, terminal, and fingerprint point sets.
struct DeploymentSpec {
    double area_width = 100.0;   // meters
    double area_height = 100.0;  // meters
    AntennaLayout antenna_layout = AntennaLayout::spread_grid;
    int antenna_count = 64;      // M
    int terminal_count = 25;     // K
    int fingerprint_count = 400; // L
    double compact_fraction = 0.2;  // side fraction used by compact_grid, in (0,1]
    std::vector<Position> explicit_antennas;  // used only by explicit_list

    void validate() const;
    Rect area() const { return Rect{0.0, 0.0, area_width, area_height}; }
};

/// Concrete deployment: every position lies inside the area rectangle.
struct Scenario {
    double area_width = 0.0;
    double area_height = 0.0;
    std::vector<Position> antennas;
    std::vector<Position> terminals;
    std::vector<Position> fingerprint_sites;

    Rect area() const { return Rect{0.0, 0.0, area_width, area_height}; }
    void validate() const;
};

/// Evenly spaced ceil(sqrt(count))^2-derived grid truncated to exactly
/// `count` points, half-cell margins from the region edges, row-major
/// (x1 varies fastest). Deterministic.
std::vector<Position> make_grid(int count, const Rect& region);

/// Lays out antennas (per spec.antenna_layout), terminals, and fingerprint
/// sites. Grid layouts ignore the seed; it is reserved for randomized
/// layouts.
Scenario build_scenario(const DeploymentSpec& spec, std::uint64_t rng_seed = 0);

/// Structured-text (JSON) scenario round trip. Coordinates serialize
/// losslessly (shortest round-trip decimal form).
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace mmfp
