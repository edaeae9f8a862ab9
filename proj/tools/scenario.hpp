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

// Scenario files: everything a subcommand needs, validated up front.
//
//   name = "ball_inward"
//   p = 2.0
//   dimension = 2
//   [initial]      points = [[...]], weights = [...]   (or file = "mu.json")
//   [dynamics]     convexified = true, optional m, l, L overrides
//   [[dynamics.generators]]   family = "constant" | "linear" |
//                             "attraction-to-set" | "interaction-kernel"
//   [constraint]   type = "support-ball" | "support-polytope" | "epigraph" |
//                  "tube"
//   [grid]         t0, T, steps, levels, dt
//   [seeds]        seed
//   [tolerances]   tol, cone
//   plus optional per-command sections [simulate], [reach], [filippov],
//   [cone], [viability], [invariance].
//
// Unknown keys are errors, reported with their line.

#ifndef CONTINCL_TOOLS_SCENARIO_HPP_
#define CONTINCL_TOOLS_SCENARIO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contincl/constraints.hpp"
#include "contincl/families.hpp"
#include "contincl/measure.hpp"
#include "toml_lite.hpp"

namespace contincl::cli {

struct GridSpec {
  double t0 = 0.0;
  double t_end = 1.0;
  std::size_t steps = 100;
  std::size_t levels = 5;
  double dt = 1e-2;
};

struct ConstraintSpec {
  std::string type;  // as in the file
  std::optional<Region> region;                   // support constraints
  std::optional<MeasureFunctional> functional;    // epigraph
  std::optional<ConstraintTube> tube;             // always set after parsing
};

struct SimulateSpec {
  std::optional<std::vector<double>> weights;  // constant selection
};

struct FilippovSpec {
  double radius = 2.0;
  std::optional<GeneratorSpec> driver;          // inadmissible reference
  std::optional<std::vector<double>> weights;   // admissible reference
  std::optional<DiscreteMeasure> reference_initial;
};

struct ConeSpec {
  std::string mode = "stationary";
  double t = 0.0;
  double zeta = 1.0;
  std::optional<std::size_t> generator;
  std::optional<std::vector<Point>> xi;
  std::optional<double> rho;  // epigraph characterization
};

struct SamplingSpec {
  std::string mode = "stationary";
  std::size_t times = 32;
  std::size_t per_time = 1;
  std::vector<double> extra_times;
  double scale = 2.0;
  std::size_t curves = 50;
};

struct Scenario {
  std::string name = "scenario";
  double p = 2.0;
  std::size_t dimension = 0;
  std::optional<DiscreteMeasure> initial;
  std::vector<GeneratorSpec> generators;
  bool convexified = true;
  std::optional<double> m, l, cap_l;
  ConstraintSpec constraint;
  bool has_constraint = false;
  GridSpec grid;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  double cone_tol = 1e-3;
  SimulateSpec simulate;
  std::size_t reach_samples = 32;
  FilippovSpec filippov;
  ConeSpec cone;
  SamplingSpec viability;
  SamplingSpec invariance;

  // SetValuedField from the generators and bounds. Throws ConfigError when
  // the scenario has no generators.
  SetValuedField field() const;
  std::vector<double> time_grid() const;
};

// `base_dir` resolves relative file references inside the scenario.
Scenario parse_scenario(const ParsedConfig& cfg, const std::string& base_dir);
// Reads a .toml or .json scenario file.
Scenario load_scenario(const std::string& path);

}  // namespace contincl::cli

#endif  // CONTINCL_TOOLS_SCENARIO_HPP_
