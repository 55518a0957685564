#pragma once

#include "matool/mesh.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace matool {

/// Positive coefficient b(r) for ((-u')^N)' = b(r) phi_{N+1}(u).
class Coefficient {
public:
  static Coefficient constant(double c);
  /// base * (1 + height) on [lo, hi], base elsewhere.
  static Coefficient box_bump(double base, double height, double lo, double hi);
  /// base * (1 + height cos^2(pi (r - center) / (2 halfwidth))) inside the bump.
  static Coefficient smooth_bump(double base, double height, double center, double halfwidth);
  /// Piecewise-linear through mesh samples.
  static Coefficient sampled(MeshPtr mesh, std::vector<double> values);
  static Coefficient from_function(std::function<double(double)> fn, std::string description);

  /// this * (1 + sum of bumps) with the bumps given as a non-negative modulation.
  Coefficient modulated(std::function<double(double)> bump, std::string description) const;
  Coefficient scaled(double k) const;

  double operator()(double r) const { return fn_(r); }
  const std::string& describe() const { return desc_; }
  std::vector<double> sample(const RadialMesh& mesh) const { return mesh.sample(fn_); }

private:
  Coefficient(std::function<double(double)> fn, std::string desc) : fn_(std::move(fn)), desc_(std::move(desc)) {}
  std::function<double(double)> fn_;
  std::string desc_;
};

/// Non-negative cos^2 bump of unit height supported on [center - halfwidth, center + halfwidth].
double cos2_bump(double r, double center, double halfwidth);

struct ComparisonProfile {
  RadialProfile profile;
  std::vector<double> flux; // (-u')^N, signed
  std::optional<double> first_zero;
  std::size_t interior_zeros = 0;
  double terminal = 0.0; // u(R), or -(R - r_hat)
};

/// Shoots ((-u')^N)' = b phi_{N+1}(u) from u(0) = amplitude, u'(0) = 0 over the whole mesh.
ComparisonProfile solve_comparison_profile(const Coefficient& b, MeshPtr mesh, int N,
                                           double amplitude = 1.0);

/// sigma with the first zero of the sigma * shape problem exactly at R.
double tune_coefficient_scale(const Coefficient& shape, MeshPtr mesh, int N, double tol = 1e-14);

struct ComparisonInstance {
  MeshPtr mesh;
  int N = 1;
  Coefficient b1;
  Coefficient b2;
  std::vector<double> b1_samples;
  std::vector<double> b2_samples;
  ComparisonProfile u1;
  ComparisonProfile u2;
};

ComparisonInstance make_comparison_instance(const Coefficient& b1, const Coefficient& b2, MeshPtr mesh,
                                            int N, double u2_amplitude = 1.0);

struct SturmResult {
  bool zero_in_interior = false;
  bool proportional = false;
  std::optional<double> mu;
  bool strict = false; // b2 > b1 somewhere
  bool equal = false;  // b1 == b2 pointwise
  std::vector<std::string> hypothesis_violations;
  std::optional<double> u2_first_zero;
  /// Conclusion of the comparison holds whenever its hypotheses do.
  bool consistent() const;
};

SturmResult sturm_compare(const ComparisonInstance& inst);

struct PiconeResult {
  double residual = 0.0;      // |Phi(T) - Phi(0) - \int_0^T Phi'|
  double boundary_term = 0.0; // Phi(T) - Phi(0)
  double rhs_integral = 0.0;  // \int_0^T (b2 - b1) u1^{N+1} + Y
  double coefficient_integral = 0.0;
  double young_min = 0.0;     // min of the Young integrand over [0, T]
  double truncation = 0.0;    // T
};

/// Picone-type identity on [0, T], T = min(R, zeros of u1, u2) - eps (default 0.05 R),
/// rounded down to a multiple of R/64.
PiconeResult picone_residual(const ComparisonInstance& inst, std::optional<double> eps = {});

/// Young integrand (-u1')^{N+1} + N (-u1 u2'/u2)^{N+1} - (N+1) u1^N (-u1') (-u2'/u2)^N.
double young_integrand(double u1, double du1, double u2, double du2, int N);

struct PiconeRefinement {
  std::vector<std::size_t> sizes;
  std::vector<double> residuals;
  std::vector<double> orders; // log2 of consecutive residual ratios
  double min_order = 0.0;
  double young_min = 0.0;
};

/// Residuals of the same pair on uniform unit meshes of the given sizes.
PiconeRefinement picone_refinement(const Coefficient& b1, const Coefficient& b2, int N,
                                   std::span<const std::size_t> sizes);

struct SturmTrial {
  std::uint64_t seed = 0;
  int N = 1;
  bool zero_in_interior = false;
  bool proportional = false;
  double mu_error = 0.0;
  double young_min = 0.0;
  std::string b2_description;
};

struct SturmSuiteReport {
  std::vector<SturmTrial> trials;
  int zero_pass = 0;
  int proportional_pass = 0;
  double max_mu_error = 0.0;
  double young_min = 0.0;
  bool passed(double mu_tol = 1e-8) const;
};

/// Randomized b2 = b1 (1 + U) trials plus b1 = b2 equality instances, N alternating over {1, 2}.
SturmSuiteReport run_sturm_suite(std::uint64_t master_seed, int trials, std::size_t mesh_n = 1025);

} // namespace matool
