#pragma once

#include "matool/mesh.hpp"
#include "matool/nonlinearity.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matool::cli {

struct ProblemConfig {
  int N = 1;
  std::optional<double> p; // defaults to N + 1
  double R = 1.0;
  std::string a = "one";
  std::string f = "homogeneous";
};

struct NumericsConfig {
  std::size_t mesh_n = 2049;
  std::string grading = "uniform";
  double tol_bisect = 1e-12;
  double tol_picard = 1e-10;
  double s_min = 1e-4;
  double s_max = 1e4;
  int s_per_decade = 48;
  double lambda_floor = 1e-6;
  double lambda_cap = 1e8;
  std::optional<double> lambda;
  std::vector<double> amplitudes;
  std::vector<double> p_grid;
  std::vector<double> probes;
};

struct SetlimConfig {
  std::string epsilon = "1/20";
  int window = 4;
  std::size_t terms = 40;
  std::string family = "example21"; // example21 | connected | literal
  std::vector<std::string> sequence; // literal terms, e.g. "[0,1] u [3,+inf]"
  int random = 50;
};

struct SturmConfig {
  int trials = 100;
  std::size_t mesh_n = 1025;
};

struct OutputConfig {
  std::string format = "csv";
  bool svg = true;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
};

struct RunConfig {
  ProblemConfig problem;
  NumericsConfig numerics;
  SetlimConfig setlim;
  SturmConfig sturm;
  OutputConfig output;

  double p() const { return problem.p.value_or(problem.N + 1.0); }
  Nonlinearity nonlinearity() const;
  WeightFunction weight() const;
  MeshPtr mesh() const;
  void validate(bool solver) const;
  nlohmann::json echo() const;
};

/// Flattens nested objects into dotted keys; arrays and scalars are leaves.
nlohmann::json flatten(const nlohmann::json& j);

/// "key=value"; value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& flat, std::string_view assignment);

/// Unknown keys are errors.
RunConfig from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

} // namespace matool::cli
