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

#include "toml_lite.hpp"

#include <gtest/gtest.h>

namespace contincl::cli {
namespace {

TEST(ParseToml, Values) {
  const ParsedConfig c = parse_toml(R"(
# comment
name = "demo"   # trailing comment
lit = 'C:\path'
p = 2.5
n = -3
big = 1_000
flag = true
sci = 1e-6
inf_val = inf
arr = [1, 2.5,
       3]  # multi-line
nested = [[1, 2], [3, 4]]

[grid]
T = 1.0
inline = { a = 1, b = "x" }

[[gens]]
family = "linear"
[[gens]]
family = "constant"
value.x = 2
)");
  const auto& j = c.root;
  EXPECT_EQ(j["name"], "demo");
  EXPECT_EQ(j["lit"], "C:\\path");
  EXPECT_EQ(j["p"], 2.5);
  EXPECT_EQ(j["n"], -3);
  EXPECT_EQ(j["big"], 1000);
  EXPECT_EQ(j["flag"], true);
  EXPECT_EQ(j["sci"], 1e-6);
  EXPECT_TRUE(std::isinf(j["inf_val"].get<double>()));
  EXPECT_EQ(j["arr"].size(), 3u);
  EXPECT_EQ(j["nested"][1][0], 3);
  EXPECT_EQ(j["grid"]["inline"]["b"], "x");
  EXPECT_EQ(j["gens"].size(), 2u);
  EXPECT_EQ(j["gens"][1]["value"]["x"], 2);
  EXPECT_EQ(c.lines.at("grid.T"), 16u);
  EXPECT_EQ(c.lines.at("gens[1].family"), 22u);
}

void expect_error_line(const std::string& text, const std::string& where) {
  try {
    parse_toml(text);
    FAIL() << "accepted: " << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
  }
}

TEST(ParseToml, LineAnchoredErrors) {
  expect_error_line("a = 1\na = 2\n", "line 2");
  expect_error_line("a = 1\n[t]\nb = \n", "line 3");
  expect_error_line("[t]\n[t]\n", "line 2");
  expect_error_line("x = \"open\n", "line 1");
  expect_error_line("ok = 1\nbad key = 2\n", "line 2");
  expect_error_line("arr = [1, 2\n", "line 1");
}

TEST(ParseJsonConfig, Accepts) {
  const ParsedConfig c = parse_json_config(R"({"p": 2.0, "grid": {"steps": 4}})");
  EXPECT_EQ(c.root["grid"]["steps"], 4);
  EXPECT_THROW(parse_json_config("{"), ConfigError);
}

}  // namespace
}  // namespace contincl::cli
