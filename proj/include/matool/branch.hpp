#pragma once

#include "matool/bvp.hpp"
#include "matool/mesh.hpp"
#include "matool/nonlinearity.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace matool {

/// The nine (f0, finf) classes.
enum class CaseId { i, ii, iii, iv, v, vi, vii, viii, ix };

std::string to_string(CaseId c);
CaseId case_of(const Nonlinearity& f);

struct BranchPoint {
  double s = 0.0;
  double lambda = 0.0;
  double sup_norm = 0.0;
  std::size_t profile_id = 0;
  std::optional<double> principal_eig;
  std::optional<int> morse_index;
  bool refined = false; // inserted by turning-point localisation
};

struct TurningPoint {
  double s = 0.0;
  double lambda = 0.0;
  bool maximum = false;
};

struct SweepFailure {
  double s = 0.0;
  std::string reason;
};

struct AsymptoteEstimate {
  enum class Kind { finite, to_zero, to_infinity };
  Kind kind = Kind::finite;
  double value = 0.0; // extrapolated limit when finite
  double error = 0.0; // extrapolation error bar
  double slope = 0.0; // log-log slope of the tail
  int tail_points = 0;
};

std::string describe(const AsymptoteEstimate& a);

struct Branch {
  Nonlinearity spec;
  MeshPtr mesh;
  LambdaSearch search;
  std::vector<BranchPoint> points; // strictly increasing in s
  std::vector<ShotResult> profiles;
  std::vector<SweepFailure> failures;
  std::vector<TurningPoint> turning_points;
  AsymptoteEstimate asymptote_zero;
  AsymptoteEstimate asymptote_inf;
  CaseId case_id = CaseId::i;
  bool vertical = false;

  const ShotResult& profile(const BranchPoint& p) const { return profiles.at(p.profile_id); }
  double min_lambda() const;
  double max_lambda() const;
};

struct SweepOptions {
  LambdaSearch search;
  double tol = 1e-12;
  double turning_tol = 1e-9; // in log s
  bool refine_turning_points = true;
  std::size_t min_points = 10;
};

/// Default amplitude grid: 48 points per decade on [1e-4, 1e4].
std::vector<double> default_amplitude_grid(int per_decade = 48, double lo = 1e-4, double hi = 1e4);

/// lambda(s) over the grid, with turning points, vertical detection and tail asymptotes.
Branch sweep(const Nonlinearity& spec, MeshPtr mesh, std::span<const double> s_grid,
             const SweepOptions& opt = {});

/// Tail estimate of lim lambda(s) at one end; throws when fewer than 5 tail points exist.
AsymptoteEstimate estimate_tail(const Branch& branch, bool small_end);

/// lambda1 / f^{1/N} with lambda1/0 = inf and lambda1/inf = 0.
double linear_threshold(double lambda1, double limit, int N);

struct AsymptoteReport {
  AsymptoteEstimate zero;
  AsymptoteEstimate inf;
  double target_zero = 0.0;
  double target_inf = 0.0;
  bool zero_matches = false;
  bool inf_matches = false;
};

AsymptoteReport estimate_asymptotes(const Branch& branch, const Nonlinearity& spec, double lambda1,
                                    double rel_tol = 1e-3);

struct SolutionCount {
  int count = 0;
  bool continuum = false;
  std::vector<double> amplitudes;
};

/// Crossings of the branch with the level lambda, each polished by bisection in s.
SolutionCount count_solutions(const Branch& branch, double lambda);

/// Threshold of a predicted interval: a number, or a feature read off a computed branch.
struct Threshold {
  enum class Kind { value, turning_max, turning_min, branch_min, branch_max };
  Kind kind = Kind::value;
  double value = 0.0;

  static Threshold of(double v) { return {Kind::value, v}; }
  std::string describe() const;
};

struct PredictedInterval {
  Threshold lo;
  Threshold hi;
  int min_count = 1;
  bool nonexistence = false;
  std::string label;
};

struct CasePrediction {
  CaseId case_id = CaseId::i;
  std::vector<PredictedInterval> intervals;
  std::string regime;
};

CasePrediction classify_case(const Nonlinearity& spec, double lambda1);

struct CaseCheck {
  double lambda = 0.0;
  std::string label;
  bool judged = false;
  bool passed = true;
  int observed = 0;
  bool continuum = false;
  std::string message;
};

struct CaseReport {
  CaseId case_id = CaseId::i;
  std::vector<CaseCheck> checks;
  bool passed() const;
};

CaseReport verify_case(const Branch& branch, const CasePrediction& prediction,
                       std::span<const double> probes, double margin = 0.02);

/// Load on the unit ball equivalent to load lambda on B_R: lambda R^2. Needs a constant weight.
double scale_to_ball(double lambda, double R, const WeightFunction& a);

} // namespace matool
