#pragma once

#include "matool/branch.hpp"
#include "matool/bvp.hpp"
#include "matool/nonlinearity.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace matool {

/// Linearization about a solution v:
///   (-q phi')' - c phi = (mu/N) r^{N-1} phi,  phi'(0) = phi(R) = 0,
/// with q = (-v')^{N-1} and c = lambda^N r^{N-1} a f'(v).
struct LinearizedProblem {
  ShotResult base;
  Nonlinearity f;
  std::vector<double> q;
  std::vector<double> c;
  int N = 1;
  double lambda = 0.0;
};

LinearizedProblem linearize(const ShotResult& base, const Nonlinearity& f);

struct LinearizedShot {
  std::vector<double> phi;
  std::vector<double> flux; // q phi' with the sign flipped: -q phi'
  std::optional<double> first_zero;
  double terminal = 0.0; // phi(R), or -(R - r_hat) after a first zero
};

LinearizedShot linearized_shoot(const LinearizedProblem& lp, double mu, bool stop_at_zero = false);

struct PrincipalMode {
  double mu = 0.0;
  RadialProfile eigenfunction; // phi(0) = 1
  int iterations = 0;
};

PrincipalMode linearized_principal_mode(const LinearizedProblem& lp,
                                        std::optional<std::pair<double, double>> bracket = {},
                                        double tol = 1e-12);
double linearized_principal_eig(const LinearizedProblem& lp,
                                std::optional<std::pair<double, double>> bracket = {},
                                double tol = 1e-12);

struct MorseResult {
  int index = 0;
  bool degenerate = false;
  double terminal = 0.0; // phi(R) at mu = 0 relative to sup |phi|
};

/// Interior zeros of the mu = 0 solution.
MorseResult morse_index(const LinearizedProblem& lp, double degenerate_tol = 1e-6);

struct StabilityCondition {
  bool holds = true;
  std::optional<double> first_violation;
};

/// f'(s) s - N f(s) < 0 on a log grid of [s_min, s_max].
StabilityCondition stability_condition_check(const Nonlinearity& f, double s_max,
                                             double s_min = 1e-6, int per_decade = 48);

struct IdentityCheck {
  double lhs = 0.0; // mu \int r^{N-1} phi v
  double rhs = 0.0; // N \int lambda^N r^{N-1} a phi (N f(v) - f'(v) v)
  double relative = 0.0; // |lhs - rhs| / max(|lhs|, |rhs|, N \int lambda^N r^{N-1} a |phi| (N f + |f'(v) v|))
};

IdentityCheck stability_identity(const LinearizedProblem& lp, const PrincipalMode& mode);

struct MonotonicityIssue {
  std::size_t index = 0; // pair (index, index + 1)
  std::string kind;       // "lambda-order", "pointwise", "tie"
  double detail = 0.0;
};

struct MonotonicityReport {
  bool monotone = true;
  std::vector<MonotonicityIssue> violations;
  std::vector<MonotonicityIssue> resolution_failures;
};

/// lambda(s) strictly increasing and v ordered pointwise along consecutive branch points.
MonotonicityReport branch_monotonicity(const Branch& branch, double tol = 1e-6,
                                       double tie_tol = 1e-12);

/// Fills principal_eig and morse_index on every branch point; optionally returns the
/// integral identity per point.
std::vector<std::optional<IdentityCheck>> annotate_stability(Branch& branch, bool with_identity = false);

struct BifurcationDirection {
  std::vector<double> amplitudes;
  std::vector<double> distances; // sup |v/s - psi1|
  bool decreasing = false;
};

/// Distance of v/s from the principal eigenfunction (psi1(0) = 1) at the smallest swept amplitudes;
/// expected to shrink toward s = 0 when f0 is finite and positive.
BifurcationDirection bifurcation_direction(const Branch& branch, const RadialProfile& psi1, std::size_t count = 3);

} // namespace matool
