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

#include "scenario.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "contincl/errors.hpp"
#include "contincl/io.hpp"

namespace contincl::cli {
namespace {

using nlohmann::json;

// A view of one table that remembers which keys were read, so that
// leftovers can be rejected with their line.
class Section {
 public:
  Section(const json& obj, std::string path, const ParsedConfig& cfg)
      : obj_(obj), path_(std::move(path)), cfg_(cfg) {
    if (!obj_.is_object()) fail(path_, "expected a table");
  }

  [[noreturn]] void fail(const std::string& key_path,
                         const std::string& msg) const {
    std::string where;
    auto it = cfg_.lines.find(key_path);
    if (it != cfg_.lines.end()) {
      where = "line " + std::to_string(it->second) + ": ";
    }
    throw ConfigError(where + msg + " ('" + key_path + "')");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return obj_.at(key);
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    return number(key);
  }
  double number(const std::string& key) {
    if (!has(key)) fail(key_path(key), "missing required key");
    const json& v = raw(key);
    if (!v.is_number()) fail(key_path(key), "expected a number");
    return v.get<double>();
  }
  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  std::size_t count(const std::string& key, std::size_t def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(key_path(key), "expected a nonnegative integer");
    }
    return v.get<std::size_t>();
  }
  std::string str(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_string()) fail(key_path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key) {
    if (!has(key)) fail(key_path(key), "missing required key");
    return str(key, "");
  }
  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(key_path(key), "expected true or false");
    return v.get<bool>();
  }
  std::vector<double> vec(const std::string& key) {
    if (!has(key)) fail(key_path(key), "missing required key");
    const json& v = raw(key);
    if (!v.is_array()) fail(key_path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key_path(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  std::vector<Point> matrix(const std::string& key) {
    if (!has(key)) fail(key_path(key), "missing required key");
    const json& v = raw(key);
    if (!v.is_array()) fail(key_path(key), "expected an array of arrays");
    std::vector<Point> out;
    for (const auto& row : v) {
      if (!row.is_array()) fail(key_path(key), "expected an array of arrays");
      Point p;
      for (const auto& x : row) {
        if (!x.is_number()) fail(key_path(key), "expected numbers");
        p.push_back(x.get<double>());
      }
      out.push_back(std::move(p));
    }
    return out;
  }
  Section sub(const std::string& key) {
    return Section(raw(key), key_path(key), cfg_);
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.count(key)) fail(key_path(key), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  const ParsedConfig& cfg_;
  std::set<std::string> used_;
};

void require_dim(Section& s, const std::string& key, std::size_t got,
                 std::size_t want) {
  if (got != want) {
    s.fail(s.key_path(key), "expected " + std::to_string(want) +
                                " components, got " + std::to_string(got));
  }
}

template <typename F>
auto guarded(Section& s, const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    s.fail(s.key_path(key), e.what());
  } catch (const HypothesisViolation& e) {
    s.fail(s.key_path(key), e.what());
  }
}

DiscreteMeasure parse_measure(Section s, std::size_t dim,
                              const std::string& base_dir) {
  DiscreteMeasure mu = guarded(s, "points", [&]() {
    if (s.has("file")) {
      std::filesystem::path f = s.str("file");
      if (f.is_relative()) f = std::filesystem::path(base_dir) / f;
      return read_measure_file(f.string());
    }
    std::vector<Point> pts = s.matrix("points");
    std::vector<double> ws;
    if (s.has("weights")) {
      ws = s.vec("weights");
    } else {
      ws.assign(pts.size(), pts.empty() ? 0.0 : 1.0 / static_cast<double>(pts.size()));
    }
    return DiscreteMeasure(std::move(pts), std::move(ws));
  });
  if (mu.dim() != dim) {
    s.fail(s.path(), "measure dimension " + std::to_string(mu.dim()) +
                         " does not match dimension " + std::to_string(dim));
  }
  s.finish();
  // Serialization must reproduce the parsed measure exactly.
  if (!(measure_from_json(measure_to_json(mu)) == mu)) {
    s.fail(s.path(), "measure does not round-trip through JSON");
  }
  return mu;
}

GeneratorSpec parse_generator(Section s, std::size_t dim) {
  const std::string family = s.str("family");
  GeneratorSpec spec = guarded(s, "family", [&]() -> GeneratorSpec {
    if (family == "constant") {
      const std::vector<double> c = s.vec("value");
      require_dim(s, "value", c.size(), dim);
      return constant_family(c);
    }
    if (family == "linear") {
      const std::vector<Point> a = s.matrix("matrix");
      require_dim(s, "matrix", a.size(), dim);
      std::vector<double> flat;
      for (const Point& row : a) {
        require_dim(s, "matrix", row.size(), dim);
        flat.insert(flat.end(), row.begin(), row.end());
      }
      Point b(dim, 0.0);
      if (s.has("offset")) {
        b = s.vec("offset");
        require_dim(s, "offset", b.size(), dim);
      }
      return linear_family(std::move(flat), std::move(b));
    }
    if (family == "attraction-to-set") {
      Point c(dim, 0.0);
      if (s.has("center")) {
        c = s.vec("center");
        require_dim(s, "center", c.size(), dim);
      }
      return attraction_to_ball_family(std::move(c), s.number("radius"),
                                       s.number("gain", 1.0));
    }
    if (family == "interaction-kernel") {
      return interaction_family(s.number("gain", 1.0));
    }
    s.fail(s.key_path("family"), "unknown generator family '" + family + "'");
  });
  s.finish();
  return spec;
}

ConstraintSpec parse_constraint(Section s, std::size_t dim, double p,
                                double horizon) {
  ConstraintSpec c;
  c.type = s.str("type");
  guarded(s, "type", [&]() {
    if (c.type == "support-ball") {
      Point center(dim, 0.0);
      if (s.has("center")) {
        center = s.vec("center");
        require_dim(s, "center", center.size(), dim);
      }
      c.region = Region::ball(std::move(center), s.number("radius"));
      c.tube = ConstraintTube::constant(
          std::make_shared<SupportConstraint>(*c.region, p), horizon);
    } else if (c.type == "support-polytope") {
      const std::vector<Point> normals = s.matrix("normals");
      const std::vector<double> offsets = s.vec("offsets");
      if (normals.size() != offsets.size()) {
        s.fail(s.key_path("offsets"), "need one offset per normal");
      }
      std::vector<Halfspace> hs;
      for (std::size_t i = 0; i < normals.size(); ++i) {
        require_dim(s, "normals", normals[i].size(), dim);
        hs.push_back({normals[i], offsets[i]});
      }
      c.region = Region::polytope(std::move(hs));
      c.tube = ConstraintTube::constant(
          std::make_shared<SupportConstraint>(*c.region, p), horizon);
    } else if (c.type == "epigraph") {
      if (dim < 2) s.fail(s.key_path("type"), "epigraph needs dimension >= 2");
      const std::string f = s.str("functional");
      if (f == "second-moment") {
        c.functional = second_moment_functional();
      } else if (f == "potential") {
        c.functional = potential_functional(s.vec("coefficients"));
      } else {
        s.fail(s.key_path("functional"), "unknown functional '" + f + "'");
      }
      c.tube = ConstraintTube::constant(
          std::make_shared<EpigraphConstraint>(*c.functional, dim - 1), horizon);
    } else if (c.type == "tube") {
      const std::string kind = s.str("kind");
      Point center(dim, 0.0);
      if (s.has("center")) {
        center = s.vec("center");
        require_dim(s, "center", center.size(), dim);
      }
      const double r0 = s.number("radius");
      double rate = s.number("rate");
      if (kind == "growing-ball") {
        rate = std::abs(rate);
      } else if (kind == "shrinking-ball") {
        rate = -std::abs(rate);
      } else if (kind != "ball-linear") {
        s.fail(s.key_path("kind"), "unknown tube kind '" + kind + "'");
      }
      c.tube = ConstraintTube::linear_ball(std::move(center), r0, rate,
                                           horizon, p);
    } else {
      s.fail(s.key_path("type"), "unknown constraint type '" + c.type + "'");
    }
    return 0;
  });
  s.finish();
  return c;
}

SamplingSpec parse_sampling(Section s) {
  SamplingSpec v;
  v.mode = s.str("mode", v.mode);
  if (v.mode != "stationary" && v.mode != "graph") {
    s.fail(s.key_path("mode"), "mode must be \"stationary\" or \"graph\"");
  }
  v.times = s.count("times", v.times);
  v.per_time = s.count("per_time", v.per_time);
  if (s.has("extra_times")) v.extra_times = s.vec("extra_times");
  v.scale = s.number("scale", v.scale);
  v.curves = s.count("curves", v.curves);
  s.finish();
  return v;
}

}  // namespace

SetValuedField Scenario::field() const {
  if (generators.empty()) throw ConfigError("scenario has no generators");
  double mm = 0.0, ll = 0.0, cl = 0.0;
  std::vector<Generator> gens;
  for (const auto& g : generators) {
    mm = std::max(mm, g.m);
    ll = std::max(ll, g.l);
    cl = std::max(cl, g.cap_l);
    gens.push_back(g.generator);
  }
  ProbeOptions probes;
  probes.t_max = std::max(grid.t_end, 1.0);
  probes.seed = seed;
  try {
    return SetValuedField(dimension, std::move(gens), convexified,
                          StepFunction(m.value_or(mm)),
                          StepFunction(l.value_or(ll)),
                          StepFunction(cap_l.value_or(cl)), p, probes);
  } catch (const HypothesisViolation& e) {
    throw ConfigError(std::string("dynamics: ") + e.what());
  }
}

std::vector<double> Scenario::time_grid() const {
  return uniform_grid(grid.t0, grid.t_end, grid.steps);
}

Scenario parse_scenario(const ParsedConfig& cfg, const std::string& base_dir) {
  Section top(cfg.root, "", cfg);
  Scenario sc;
  sc.name = top.str("name", sc.name);
  sc.p = top.number("p", sc.p);
  if (!(sc.p > 1.0) || !std::isfinite(sc.p)) top.fail("p", "p must lie in (1, inf)");
  sc.dimension = top.count("dimension", 0);
  if (sc.dimension == 0) top.fail("dimension", "dimension must be >= 1");

  if (top.has("grid")) {
    Section g = top.sub("grid");
    sc.grid.t0 = g.number("t0", sc.grid.t0);
    sc.grid.t_end = g.number("T", sc.grid.t_end);
    sc.grid.steps = g.count("steps", sc.grid.steps);
    sc.grid.levels = g.count("levels", sc.grid.levels);
    sc.grid.dt = g.number("dt", sc.grid.dt);
    if (!(sc.grid.t_end > sc.grid.t0)) g.fail(g.key_path("T"), "need T > t0");
    if (sc.grid.steps == 0) g.fail(g.key_path("steps"), "need steps >= 1");
    if (!(sc.grid.dt > 0.0)) g.fail(g.key_path("dt"), "need dt > 0");
    if (sc.grid.levels > 16) g.fail(g.key_path("levels"), "at most 16 levels");
    g.finish();
  }
  if (top.has("seeds")) {
    Section s = top.sub("seeds");
    const json& v = s.has("seed") ? s.raw("seed") : json(0);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      s.fail(s.key_path("seed"), "seed must be a nonnegative integer");
    }
    sc.seed = v.get<std::uint64_t>();
    s.finish();
  }
  if (top.has("tolerances")) {
    Section s = top.sub("tolerances");
    sc.tol = s.number("tol", sc.tol);
    sc.cone_tol = s.number("cone", sc.cone_tol);
    s.finish();
  }
  if (top.has("initial")) {
    sc.initial = parse_measure(top.sub("initial"), sc.dimension, base_dir);
  }
  if (top.has("dynamics")) {
    Section d = top.sub("dynamics");
    sc.convexified = d.boolean("convexified", sc.convexified);
    sc.m = d.opt_number("m");
    sc.l = d.opt_number("l");
    sc.cap_l = d.opt_number("L");
    if (d.has("generators")) {
      const json& arr = d.raw("generators");
      if (!arr.is_array()) d.fail(d.key_path("generators"), "expected [[dynamics.generators]] tables");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        sc.generators.push_back(parse_generator(
            Section(arr[i], "dynamics.generators[" + std::to_string(i) + "]", cfg),
            sc.dimension));
      }
    }
    d.finish();
  }
  if (top.has("constraint")) {
    sc.constraint = parse_constraint(top.sub("constraint"), sc.dimension, sc.p,
                                     sc.grid.t_end);
    sc.has_constraint = true;
  }
  if (top.has("simulate")) {
    Section s = top.sub("simulate");
    if (s.has("weights")) sc.simulate.weights = s.vec("weights");
    s.finish();
  }
  if (top.has("reach")) {
    Section s = top.sub("reach");
    sc.reach_samples = s.count("samples", sc.reach_samples);
    if (sc.reach_samples == 0) s.fail(s.key_path("samples"), "need samples >= 1");
    s.finish();
  }
  if (top.has("filippov")) {
    Section s = top.sub("filippov");
    sc.filippov.radius = s.number("radius", sc.filippov.radius);
    if (s.has("weights")) sc.filippov.weights = s.vec("weights");
    if (s.has("driver")) {
      sc.filippov.driver = parse_generator(s.sub("driver"), sc.dimension);
    }
    if (s.has("reference_initial")) {
      sc.filippov.reference_initial =
          parse_measure(s.sub("reference_initial"), sc.dimension, base_dir);
    }
    if (sc.filippov.weights && sc.filippov.driver) {
      s.fail(s.path(), "give either weights or a driver, not both");
    }
    s.finish();
  }
  if (top.has("cone")) {
    Section s = top.sub("cone");
    sc.cone.mode = s.str("mode", sc.cone.mode);
    if (sc.cone.mode != "stationary" && sc.cone.mode != "graph") {
      s.fail(s.key_path("mode"), "mode must be \"stationary\" or \"graph\"");
    }
    sc.cone.t = s.number("t", sc.cone.t);
    sc.cone.zeta = s.number("zeta", sc.cone.zeta);
    if (s.has("generator")) sc.cone.generator = s.count("generator", 0);
    if (s.has("xi")) sc.cone.xi = s.matrix("xi");
    sc.cone.rho = s.opt_number("rho");
    s.finish();
  }
  if (top.has("viability")) sc.viability = parse_sampling(top.sub("viability"));
  if (top.has("invariance")) sc.invariance = parse_sampling(top.sub("invariance"));
  top.finish();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  const std::string text = read_text_file(path);
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  const ParsedConfig cfg = is_json ? parse_json_config(text) : parse_toml(text);
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return parse_scenario(cfg, base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace contincl::cli
