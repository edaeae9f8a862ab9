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

#include "contincl/io.hpp"

#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "contincl/errors.hpp"
#include "test_util.hpp"

namespace contincl {
namespace {

using testing::line;
using testing::random_measure;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5e-20), "-2.5e-20");
  EXPECT_EQ(format_double(INFINITY), "inf");
  SplitMix64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(MeasureJson, RoundTripsBitForBit) {
  SplitMix64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const DiscreteMeasure mu = random_measure(rng, 1 + rng.index(6), 1 + rng.index(3));
    EXPECT_EQ(measure_from_json(measure_to_json(mu)), mu);
    EXPECT_EQ(measure_from_json(nlohmann::json::parse(measure_to_json(mu).dump())), mu);
    EXPECT_EQ(measure_from_csv(measure_to_csv(mu)), mu);
  }
}

TEST(MeasureJson, RejectsMalformed) {
  using nlohmann::json;
  EXPECT_THROW(measure_from_json(json::parse(R"({"points": [[0]]})")), InvalidInput);
  EXPECT_THROW(
      measure_from_json(json::parse(R"({"dim": 2, "points": [[0]], "weights": [1]})")),
      InvalidInput);
  EXPECT_THROW(measure_from_json(json::parse(
                   R"({"dim": 1, "points": [[0]], "weights": [1], "extra": 0})")),
               InvalidInput);
}

TEST(MeasureCsv, CommentsAndErrors) {
  const DiscreteMeasure mu = measure_from_csv("# two atoms\n0.5,0\n0.5,1\n");
  EXPECT_EQ(mu, line({0.0, 1.0}, {0.5, 0.5}));
  try {
    measure_from_csv("0.5,0\n0.5,x\n");
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(MeasureFiles, DispatchOnExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "contincl_io_test";
  std::filesystem::create_directories(dir);
  const DiscreteMeasure mu = line({0.25, -3.0}, {0.4, 0.6});
  for (const char* name : {"m.json", "m.csv"}) {
    const std::string path = (dir / name).string();
    write_measure_file(path, mu);
    EXPECT_EQ(read_measure_file(path), mu);
  }
  EXPECT_THROW(read_measure_file((dir / "m.txt").string()), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST(CurveCsv, HeaderAndRows) {
  MeasureCurve c;
  c.times = {0.0, 0.5};
  c.states = {line({1.0}, {1.0}), line({2.0}, {1.0})};
  EXPECT_EQ(curve_to_csv(c), "t,atom,weight,x1\n0.0,0,1.0,1.0\n0.5,0,1.0,2.0\n");
  EXPECT_EQ(curve_to_csv(c, std::vector<double>{0.0, 1e-7}),
            "t,atom,weight,x1,g\n0.0,0,1.0,1.0,0.0\n0.5,0,1.0,2.0,1e-07\n");
}

TEST(PlanJson, Entries) {
  const DiscreteMeasure a = line({0.0, 1.0}, {0.5, 0.5});
  const TransportPlan plan(a, a, {0.5, 0.0, 0.0, 0.5});
  const nlohmann::json j = plan_to_json(plan);
  EXPECT_EQ(j["source_idx"], nlohmann::json({0, 1}));
  EXPECT_EQ(j["target_idx"], nlohmann::json({0, 1}));
}

}  // namespace
}  // namespace contincl
