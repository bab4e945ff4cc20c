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

#include "mmfp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mmfp {

using nlohmann::json;

const char* antenna_layout_name(AntennaLayout l) {
    switch (l) {
        case AntennaLayout::compact_grid: return "compact";
        case AntennaLayout::spread_grid: return "spread";
        case AntennaLayout::explicit_list: return "explicit";
    }
    return "unknown";
}

AntennaLayout antenna_layout_from_name(const std::string& name) {
    if (name == "compact") return AntennaLayout::compact_grid;
    if (name == "spread") return AntennaLayout::spread_grid;
    if (name == "explicit") return AntennaLayout::explicit_list;
    throw ValidationError("unknown antenna layout '" + name + "'");
}

void DeploymentSpec::validate() const {
    if (!(area_width > 0.0) || !(area_height > 0.0))
        throw ValidationError("area dimensions must be positive");
    if (antenna_count < 1) throw ValidationError("antenna count M must be >= 1");
    if (terminal_count < 1) throw ValidationError("terminal count K must be >= 1");
    if (fingerprint_count < 1) throw ValidationError("fingerprint count L must be >= 1");
    if (!(compact_fraction > 0.0) || compact_fraction > 1.0)
        throw ValidationError("compact_fraction must lie in (0, 1]");
    if (antenna_layout == AntennaLayout::explicit_list) {
        if (static_cast<int>(explicit_antennas.size()) != antenna_count)
            throw ValidationError("explicit antenna list length does not match antenna count");
        const Rect a = area();
        for (const Position& p : explicit_antennas) {
            if (!p.finite() || !a.contains(p))
                throw ValidationError("explicit antenna position outside the deployment area");
        }
    }
}

void Scenario::validate() const {
    if (!(area_width > 0.0) || !(area_height > 0.0))
        throw ValidationError("scenario area dimensions must be positive");
    const Rect a = area();
    auto check = [&](const std::vector<Position>& pts, const char* what) {
        if (pts.empty()) throw ValidationError(std::string(what) + " list is empty");
        for (const Position& p : pts) {
            if (!p.finite() || !a.contains(p))
                throw ValidationError(std::string(what) + " position outside the deployment area");
        }
    };
    check(antennas, "antenna");
    check(terminals, "terminal");
    check(fingerprint_sites, "fingerprint site");
}

std::vector<Position> make_grid(int count, const Rect& region) {
    if (count < 1) throw ValidationError("grid count must be >= 1");
    if (region.degenerate()) throw ValidationError("grid region must have positive area");

    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
    const double cell_w = region.width / side;
    const double cell_h = region.height / side;

    std::vector<Position> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int row = 0; row < side && static_cast<int>(pts.size()) < count; ++row) {
        for (int col = 0; col < side && static_cast<int>(pts.size()) < count; ++col) {
            pts.push_back(Position{region.x0 + (col + 0.5) * cell_w,
                                   region.y0 + (row + 0.5) * cell_h});
        }
    }
    return pts;
}

Scenario build_scenario(const DeploymentSpec& spec, std::uint64_t /*rng_seed*/) {
    spec.validate();

    Scenario s;
    s.area_width = spec.area_width;
    s.area_height = spec.area_height;

    switch (spec.antenna_layout) {
        case AntennaLayout::spread_grid:
            s.antennas = make_grid(spec.antenna_count, spec.area());
            break;
        case AntennaLayout::compact_grid: {
            const double side = spec.compact_fraction * std::min(spec.area_width, spec.area_height);
            const Rect sub{(spec.area_width - side) / 2.0, (spec.area_height - side) / 2.0, side, side};
            s.antennas = make_grid(spec.antenna_count, sub);
            break;
        }
        case AntennaLayout::explicit_list:
            s.antennas = spec.explicit_antennas;
            break;
    }

    s.terminals = make_grid(spec.terminal_count, spec.area());
    s.fingerprint_sites = make_grid(spec.fingerprint_count, spec.area());

    // A fingerprint site exactly on an antenna cannot be measured (zero
    // distance). Matching grid spacings make this happen systematically,
    // e.g. M = L = 100 puts every site on an antenna. Such sites are nudged
    // diagonally by a quarter of their grid cell (staying inside the area,
    // since grid points keep half-cell margins).
    const int fp_side =
        static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.fingerprint_count))));
    const double cell_w = spec.area_width / fp_side;
    const double cell_h = spec.area_height / fp_side;
    auto on_antenna = [&](const Position& p) {
        for (const Position& a : s.antennas)
            if (p == a) return true;
        return false;
    };
    for (Position& site : s.fingerprint_sites) {
        if (!on_antenna(site)) continue;
        for (double frac : {0.25, 0.125, 0.0625, 0.03125}) {
            const Position moved{site.x1 + frac * cell_w, site.x2 + frac * cell_h};
            if (!on_antenna(moved)) {
                site = moved;
                break;
            }
        }
    }

    s.validate();
    return s;
}

static json positions_to_json(const std::vector<Position>& pts) {
    json arr = json::array();
    for (const Position& p : pts) arr.push_back(json::array({p.x1, p.x2}));
    return arr;
}

static std::vector<Position> positions_from_json(const json& arr, const char* what) {
    if (!arr.is_array()) throw ValidationError(std::string(what) + " must be an array");
    std::vector<Position> pts;
    pts.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ValidationError(std::string(what) + " entries must be [x1, x2] pairs");
        pts.push_back(Position{e[0].get<double>(), e[1].get<double>()});
    }
    return pts;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["area"] = {{"width_m", s.area_width}, {"height_m", s.area_height}};
    j["antennas"] = positions_to_json(s.antennas);
    j["terminals"] = positions_to_json(s.terminals);
    j["fingerprint_sites"] = positions_to_json(s.fingerprint_sites);
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("scenario document must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "area" && key != "antennas" && key != "terminals" && key != "fingerprint_sites")
            throw ValidationError("unknown scenario key '" + key + "'");
    }
    if (!j.contains("area") || !j["area"].is_object())
        throw ValidationError("scenario is missing the area object");

    Scenario s;
    const json& area = j["area"];
    for (const auto& [key, _] : area.items()) {
        if (key != "width_m" && key != "height_m")
            throw ValidationError("unknown scenario area key '" + key + "'");
    }
    if (!area.contains("width_m") || !area.contains("height_m"))
        throw ValidationError("scenario area needs width_m and height_m");
    s.area_width = area["width_m"].get<double>();
    s.area_height = area["height_m"].get<double>();
    s.antennas = positions_from_json(j.value("antennas", json::array()), "antennas");
    s.terminals = positions_from_json(j.value("terminals", json::array()), "terminals");
    s.fingerprint_sites = positions_from_json(j.value("fingerprint_sites", json::array()), "fingerprint_sites");
    s.validate();
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << scenario_to_json(s);
    if (!out) throw IoError("write failure on '" + path + "'");
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace mmfp
