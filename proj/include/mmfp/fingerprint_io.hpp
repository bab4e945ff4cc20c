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

#include <string>

#include "mmfp/training_set.hpp"

namespace mmfp {

// CSV layout: header "x1,x2,rss_0,...,rss_{M-1}", one fingerprint per line,
// LF line endings, doubles at full round-trip precision.
void save_fingerprints(const TrainingSet& train, const std::string& path);
TrainingSet load_fingerprints(const std::string& path);

}  // namespace mmfp
