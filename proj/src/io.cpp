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

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "contincl/errors.hpp"

namespace contincl {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

nlohmann::json measure_to_json(const DiscreteMeasure& mu) {
  nlohmann::json j;
  j["dim"] = mu.dim();
  j["points"] = mu.points();
  j["weights"] = mu.weights();
  return j;
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("weights")) {
    throw InvalidInput("measure JSON needs \"points\" and \"weights\"");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "dim" && key != "points" && key != "weights") {
      throw InvalidInput("measure JSON: unknown key \"" + key + "\"");
    }
  }
  std::vector<Point> pts;
  std::vector<double> ws;
  try {
    pts = j.at("points").get<std::vector<Point>>();
    ws = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("measure JSON: ") + e.what());
  }
  DiscreteMeasure mu(std::move(pts), std::move(ws));
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() != mu.dim()) {
      throw InvalidInput("measure JSON: \"dim\" does not match the points");
    }
  }
  return mu;
}

std::string measure_to_csv(const DiscreteMeasure& mu) {
  std::string out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out += format_double(mu.weight(i));
    for (double c : mu.point(i)) out += "," + format_double(c);
    out += "\n";
  }
  return out;
}

namespace {

double parse_number(const std::string& tok, std::size_t line) {
  std::size_t b = tok.find_first_not_of(" \t\r");
  std::size_t e = tok.find_last_not_of(" \t\r");
  if (b == std::string::npos) {
    throw InvalidInput("line " + std::to_string(line) + ": empty field");
  }
  const std::string s = tok.substr(b, e - b + 1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidInput("line " + std::to_string(line) + ": bad number '" + s +
                       "'");
  }
  return v;
}

}  // namespace

DiscreteMeasure measure_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Point> pts;
  std::vector<double> ws;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string tok;
    while (std::getline(fields, tok, ',')) row.push_back(parse_number(tok, lineno));
    if (row.size() < 2) {
      throw InvalidInput("line " + std::to_string(lineno) +
                         ": need weight and at least one coordinate");
    }
    ws.push_back(row[0]);
    pts.emplace_back(row.begin() + 1, row.end());
  }
  return DiscreteMeasure(std::move(pts), std::move(ws));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidInput("write failed for '" + path + "'");
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

DiscreteMeasure read_measure_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (ends_with(path, ".csv")) return measure_from_csv(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("'" + path + "': " + e.what());
  }
  return measure_from_json(j);
}

void write_measure_file(const std::string& path, const DiscreteMeasure& mu) {
  if (ends_with(path, ".csv")) {
    write_text_file(path, measure_to_csv(mu));
  } else {
    write_text_file(path, dump_json(measure_to_json(mu)));
  }
}

nlohmann::json plan_to_json(const TransportPlan& plan) {
  nlohmann::json j;
  std::vector<std::size_t> src, dst;
  std::vector<double> mass;
  for (const auto& e : plan.entries()) {
    src.push_back(e.source_idx);
    dst.push_back(e.target_idx);
    mass.push_back(e.mass);
  }
  j["source_idx"] = src;
  j["target_idx"] = dst;
  j["mass"] = mass;
  return j;
}

std::string curve_to_csv(const MeasureCurve& curve,
                         const std::optional<std::vector<double>>& g) {
  if (g && g->size() != curve.times.size()) {
    throw InvalidInput("curve_to_csv: need one g value per time");
  }
  std::string out = "t,atom,weight";
  const std::size_t d = curve.states.empty() ? 0 : curve.states.front().dim();
  for (std::size_t c = 0; c < d; ++c) out += ",x" + std::to_string(c + 1);
  if (g) out += ",g";
  out += "\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const DiscreteMeasure& s = curve.states[i];
    for (std::size_t a = 0; a < s.size(); ++a) {
      out += format_double(curve.times[i]) + "," + std::to_string(a) + "," +
             format_double(s.weight(a));
      for (double c : s.point(a)) out += "," + format_double(c);
      if (g) out += "," + format_double((*g)[i]);
      out += "\n";
    }
  }
  return out;
}

nlohmann::json curve_to_json(const MeasureCurve& curve,
                             const std::optional<std::vector<double>>& g) {
  nlohmann::json j;
  j["times"] = curve.times;
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : curve.states) states.push_back(measure_to_json(s));
  j["states"] = std::move(states);
  if (g) j["g"] = *g;
  if (curve.selection) {
    j["selection"] = {{"time_grid", curve.selection->time_grid},
                      {"weights", curve.selection->weights}};
  }
  return j;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace contincl
