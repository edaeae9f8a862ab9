// Copyright 2026 The contincl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reader for the scenario file format: a subset of TOML covering comments,
// [tables], [[arrays of tables]], dotted keys, strings, numbers, booleans,
// multi-line arrays and single-line inline tables. The result is a JSON
// value plus the source line of every key, used for line-anchored errors.

#ifndef CONTINCL_TOOLS_TOML_LITE_HPP_
#define CONTINCL_TOOLS_TOML_LITE_HPP_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace contincl::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedConfig {
  nlohmann::json root;
  // Key path ("grid.steps", "dynamics.generators[1].family") -> line.
  std::map<std::string, std::size_t> lines;
};

// Throws ConfigError("line N: ...") on malformed input.
ParsedConfig parse_toml(const std::string& text);

// JSON configs carry no line information.
ParsedConfig parse_json_config(const std::string& text);

}  // namespace contincl::cli

#endif  // CONTINCL_TOOLS_TOML_LITE_HPP_
