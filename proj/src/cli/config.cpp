#include "matool/cli/config.hpp"

#include "matool/error.hpp"

#include <fmt/core.h>
#include <fstream>
#include <set>
#include <sstream>

namespace matool::cli {

using nlohmann::json;

Nonlinearity RunConfig::nonlinearity() const {
  return Nonlinearity::parse(problem.f, problem.N);
}

WeightFunction RunConfig::weight() const {
  return WeightFunction::parse(problem.a);
}

MeshPtr RunConfig::mesh() const {
  return RadialMesh::build(numerics.mesh_n, problem.R, weight(), parse_grading(numerics.grading));
}

void RunConfig::validate(bool solver) const {
  if (problem.N < 1)
    throw InvalidArgument("problem.N must be at least 1");
  if (problem.p && !(*problem.p >= 2.0))
    throw InvalidArgument("problem.p must be at least 2");
  if (!(problem.R > 0.0))
    throw InvalidArgument("problem.R must be positive");
  if (!(numerics.tol_bisect > 0.0) || !(numerics.tol_picard > 0.0))
    throw InvalidArgument("tolerances must be positive");
  if (!(numerics.s_min > 0.0) || !(numerics.s_max > numerics.s_min))
    throw InvalidArgument("need 0 < numerics.s_min < numerics.s_max");
  if (numerics.s_per_decade < 1)
    throw InvalidArgument("numerics.s_per_decade must be positive");
  if (!(numerics.lambda_floor > 0.0) || !(numerics.lambda_cap > numerics.lambda_floor))
    throw InvalidArgument("need 0 < numerics.lambda_floor < numerics.lambda_cap");
  if (solver && numerics.mesh_n < 64)
    throw InvalidArgument("numerics.mesh_n must be at least 64 for solver subcommands");
  if (output.format != "csv" && output.format != "json")
    throw InvalidArgument(fmt::format("output.format must be csv or json, got '{}'", output.format));
  if (setlim.window < 1)
    throw InvalidArgument("setlim.window must be at least 1");
  if (sturm.trials < 1)
    throw InvalidArgument("sturm.trials must be positive");
  parse_grading(numerics.grading);
  weight();
  nonlinearity();
}

json RunConfig::echo() const {
  json j;
  j["problem"] = {{"N", problem.N}, {"p", problem.p ? json(*problem.p) : json(nullptr)}, {"R", problem.R}, {"a", problem.a}, {"f", problem.f}};
  json n = {{"mesh_n", numerics.mesh_n},         {"grading", numerics.grading},
            {"tol_bisect", numerics.tol_bisect}, {"tol_picard", numerics.tol_picard},
            {"s_min", numerics.s_min},           {"s_max", numerics.s_max},
            {"s_per_decade", numerics.s_per_decade}, {"lambda_floor", numerics.lambda_floor},
            {"lambda_cap", numerics.lambda_cap}, {"amplitudes", numerics.amplitudes},
            {"p_grid", numerics.p_grid},         {"probes", numerics.probes}};
  n["lambda"] = numerics.lambda ? json(*numerics.lambda) : json(nullptr);
  j["numerics"] = n;
  j["setlim"] = {{"epsilon", setlim.epsilon}, {"window", setlim.window}, {"terms", setlim.terms},
                 {"family", setlim.family},   {"sequence", setlim.sequence}, {"random", setlim.random}};
  j["sturm"] = {{"trials", sturm.trials}, {"mesh_n", sturm.mesh_n}};
  j["output"] = {{"format", output.format}, {"svg", output.svg}, {"out_dir", output.out_dir},
                 {"seed", output.seed}};
  return j;
}

namespace {

void flatten_into(const json& j, const std::string& prefix, json& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else {
    out[prefix] = j;
  }
}

template <class T>
T get(const json& flat, const std::string& key, std::set<std::string>& used, T fallback) {
  used.insert(key);
  if (!flat.contains(key) || flat[key].is_null())
    return fallback;
  try {
    return flat[key].get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("config key '{}' has the wrong type: {}", key, e.what()));
  }
}

std::optional<double> get_opt(const json& flat, const std::string& key, std::set<std::string>& used) {
  used.insert(key);
  if (!flat.contains(key) || flat[key].is_null())
    return std::nullopt;
  if (!flat[key].is_number())
    throw InvalidArgument(fmt::format("config key '{}' must be a number", key));
  return flat[key].get<double>();
}

} // namespace

json flatten(const json& j) {
  json out = json::object();
  if (!j.is_object())
    throw InvalidArgument("config must be a JSON object");
  flatten_into(j, "", out);
  return out;
}

void apply_override(json& flat, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw InvalidArgument(fmt::format("override must look like key=value, got '{}'", assignment));
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded())
    value = raw;
  flat[key] = value;
}

RunConfig from_json(const json& j) {
  const json flat = flatten(j);
  std::set<std::string> used;
  RunConfig c;
  c.problem.N = get(flat, "problem.N", used, c.problem.N);
  c.problem.p = get_opt(flat, "problem.p", used);
  c.problem.R = get(flat, "problem.R", used, c.problem.R);
  c.problem.a = get(flat, "problem.a", used, c.problem.a);
  c.problem.f = get(flat, "problem.f", used, c.problem.f);

  auto& n = c.numerics;
  n.mesh_n = get(flat, "numerics.mesh_n", used, n.mesh_n);
  n.grading = get(flat, "numerics.grading", used, n.grading);
  n.tol_bisect = get(flat, "numerics.tol_bisect", used, n.tol_bisect);
  n.tol_picard = get(flat, "numerics.tol_picard", used, n.tol_picard);
  n.s_min = get(flat, "numerics.s_min", used, n.s_min);
  n.s_max = get(flat, "numerics.s_max", used, n.s_max);
  n.s_per_decade = get(flat, "numerics.s_per_decade", used, n.s_per_decade);
  n.lambda_floor = get(flat, "numerics.lambda_floor", used, n.lambda_floor);
  n.lambda_cap = get(flat, "numerics.lambda_cap", used, n.lambda_cap);
  n.lambda = get_opt(flat, "numerics.lambda", used);
  n.amplitudes = get(flat, "numerics.amplitudes", used, n.amplitudes);
  n.p_grid = get(flat, "numerics.p_grid", used, n.p_grid);
  n.probes = get(flat, "numerics.probes", used, n.probes);

  auto& s = c.setlim;
  if (flat.contains("setlim.epsilon") && flat["setlim.epsilon"].is_number()) {
    used.insert("setlim.epsilon");
    s.epsilon = flat["setlim.epsilon"].dump();
  } else {
    s.epsilon = get(flat, "setlim.epsilon", used, s.epsilon);
  }
  s.window = get(flat, "setlim.window", used, s.window);
  s.terms = get(flat, "setlim.terms", used, s.terms);
  s.family = get(flat, "setlim.family", used, s.family);
  s.sequence = get(flat, "setlim.sequence", used, s.sequence);
  s.random = get(flat, "setlim.random", used, s.random);

  c.sturm.trials = get(flat, "sturm.trials", used, c.sturm.trials);
  c.sturm.mesh_n = get(flat, "sturm.mesh_n", used, c.sturm.mesh_n);

  c.output.format = get(flat, "output.format", used, c.output.format);
  c.output.svg = get(flat, "output.svg", used, c.output.svg);
  c.output.out_dir = get(flat, "output.out_dir", used, c.output.out_dir);
  c.output.seed = get(flat, "output.seed", used, c.output.seed);

  for (auto it = flat.begin(); it != flat.end(); ++it)
    if (!used.count(it.key()))
      throw InvalidArgument(fmt::format("unknown config key '{}'", it.key()));
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in)
      throw InvalidArgument(fmt::format("cannot open config '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    j = json::parse(ss.str(), nullptr, false, true);
    if (j.is_discarded())
      throw InvalidArgument(fmt::format("malformed config '{}'", path));
  }
  json flat = flatten(j);
  for (const auto& o : overrides)
    apply_override(flat, o);
  return from_json(flat);
}

} // namespace matool::cli
