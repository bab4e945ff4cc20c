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

#include <stdexcept>
#include <string>

namespace mmfp {

// Error taxonomy shared by the library and the CLI. Each class maps to a
// distinct CLI exit code and a one-line machine-parsable message of the
// form "error: <class>: <message>".
enum class ErrorClass {
    usage,       // bad command line
    config,      // malformed or inconsistent configuration
    io,          // file missing, unreadable, or unwritable
    dimension,   // vector/matrix length mismatch
    validation,  // value outside its documented domain
    geometry,    // degenerate deployment geometry (e.g. zero distance)
    numeric,     // factorization failure, non-finite result
};

const char* error_class_name(ErrorClass c);
int error_class_exit_code(ErrorClass c);

class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, const std::string& msg)
        : std::runtime_error(std::string(error_class_name(cls)) + ": " + msg), cls_(cls) {}

    ErrorClass error_class() const { return cls_; }

  private:
    ErrorClass cls_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorClass::config, m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorClass::io, m) {}
};
struct DimensionError : Error {
    explicit DimensionError(const std::string& m) : Error(ErrorClass::dimension, m) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorClass::validation, m) {}
};
struct GeometryError : Error {
    explicit GeometryError(const std::string& m) : Error(ErrorClass::geometry, m) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& m) : Error(ErrorClass::numeric, m) {}
};

inline const char* error_class_name(ErrorClass c) {
    switch (c) {
        case ErrorClass::usage: return "usage";
        case ErrorClass::config: return "config";
        case ErrorClass::io: return "io";
        case ErrorClass::dimension: return "dimension";
        case ErrorClass::validation: return "validation";
        case ErrorClass::geometry: return "geometry";
        case ErrorClass::numeric: return "numeric";
    }
    return "unknown";
}

inline int error_class_exit_code(ErrorClass c) {
    switch (c) {
        case ErrorClass::usage: return 2;
        case ErrorClass::config: return 3;
        case ErrorClass::io: return 4;
        case ErrorClass::dimension: return 5;
        case ErrorClass::validation: return 6;
        case ErrorClass::geometry: return 7;
        case ErrorClass::numeric: return 8;
    }
    return 1;
}

}  // namespace mmfp
