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

#include "mmfp/fingerprint_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mmfp/errors.hpp"

namespace mmfp {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_field(const std::string& field, std::size_t line_no, std::size_t col) {
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw IoError("line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                      ": '" + field + "' is not a number");
    }
    if (consumed != field.size())
        throw IoError("line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                      ": trailing characters in '" + field + "'");
    return v;
}

}  // namespace

void save_fingerprints(const TrainingSet& train, const std::string& path) {
    train.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    out << "x1,x2";
    for (Eigen::Index m = 0; m < train.dimension(); ++m) out << ",rss_" << m;
    out << '\n';
    for (Eigen::Index l = 0; l < train.size(); ++l) {
        out << fmt_double(train.targets_x1[l]) << ',' << fmt_double(train.targets_x2[l]);
        for (Eigen::Index m = 0; m < train.dimension(); ++m)
            out << ',' << fmt_double(train.inputs(l, m));
        out << '\n';
    }
    if (!out) throw IoError("write failure on '" + path + "'");
}

TrainingSet load_fingerprints(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "x1" || header[1] != "x2")
        throw IoError("'" + path + "' header must start with x1,x2,rss_0");
    const std::size_t dim = header.size() - 2;
    for (std::size_t m = 0; m < dim; ++m) {
        if (header[m + 2] != "rss_" + std::to_string(m))
            throw IoError("'" + path + "' header column " + std::to_string(m + 3) +
                          " must be rss_" + std::to_string(m));
    }

    std::vector<double> x1s, x2s, rss;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != dim + 2)
            throw IoError("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(dim + 2) + " fields, found " +
                          std::to_string(fields.size()));
        x1s.push_back(parse_field(fields[0], line_no, 0));
        x2s.push_back(parse_field(fields[1], line_no, 1));
        for (std::size_t m = 0; m < dim; ++m)
            rss.push_back(parse_field(fields[m + 2], line_no, m + 2));
    }
    if (x1s.empty()) throw IoError("'" + path + "' holds no fingerprints");

    const Eigen::Index n = static_cast<Eigen::Index>(x1s.size());
    const Eigen::Index m = static_cast<Eigen::Index>(dim);
    TrainingSet t;
    t.inputs.resize(n, m);
    for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index j = 0; j < m; ++j)
            t.inputs(l, j) = rss[static_cast<std::size_t>(l) * dim + static_cast<std::size_t>(j)];
    t.targets_x1 = Eigen::Map<const Eigen::VectorXd>(x1s.data(), n);
    t.targets_x2 = Eigen::Map<const Eigen::VectorXd>(x2s.data(), n);
    t.validate();
    return t;
}

}  // namespace mmfp
