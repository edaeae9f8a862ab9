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

// Serialization of measures, plans and curves.
//
//   measure JSON  {"dim": d, "points": [[...], ...], "weights": [...]}
//   measure CSV   one atom per row: weight,x_1,...,x_d ('#' starts a comment)
//   plan JSON     {"source_idx": [...], "target_idx": [...], "mass": [...]}
//   curve CSV     t,atom,weight,x_1,...,x_d[,g]
//
// Numbers are written in shortest round-trip form, so parse(serialize(x))
// reproduces x bit for bit and output is byte-stable.

#ifndef CONTINCL_IO_HPP_
#define CONTINCL_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "contincl/dynamics.hpp"
#include "contincl/measure.hpp"
#include "contincl/transport.hpp"

namespace contincl {

// Shortest decimal form that parses back to x (always with a '.', 'e',
// "inf" or "nan" so it reads as a float).
std::string format_double(double x);

nlohmann::json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

std::string measure_to_csv(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_csv(const std::string& text);

// Dispatches on the extension (.json or .csv).
DiscreteMeasure read_measure_file(const std::string& path);
void write_measure_file(const std::string& path, const DiscreteMeasure& mu);

nlohmann::json plan_to_json(const TransportPlan& plan);

// `g` (if given) has one value per curve time and becomes the last column.
std::string curve_to_csv(const MeasureCurve& curve,
                         const std::optional<std::vector<double>>& g = {});
nlohmann::json curve_to_json(const MeasureCurve& curve,
                             const std::optional<std::vector<double>>& g = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Pretty JSON with two-space indent and a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace contincl

#endif  // CONTINCL_IO_HPP_
