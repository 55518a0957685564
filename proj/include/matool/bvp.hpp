#pragma once

#include "matool/detail/radial_ivp.hpp"
#include "matool/mesh.hpp"
#include "matool/nonlinearity.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace matool {

/// One shot of ((-v')^N)' = lambda^N N r^{N-1} a(r) f(v), v(0) = s, v'(0) = 0.
struct ShotResult {
  RadialProfile profile;
  double terminal = 0.0;             // v(R), or -(R - r_hat) after a first zero r_hat < R
  std::optional<double> hit_zero_at; // r_hat
  std::vector<double> flux;          // w = (-v')^N
  double lambda = 0.0;
  double amplitude = 0.0;
};

/// Reusable shooting context for one (f, mesh) pair.
class BvpShooter {
public:
  BvpShooter(Nonlinearity f, MeshPtr mesh);

  /// Terminal with sentinel; stops at the first zero. NaN when the IVP overflows.
  double terminal(double lambda, double s) const;
  ShotResult shoot(double lambda, double s) const;

  const Nonlinearity& nonlinearity() const { return f_; }
  const MeshPtr& mesh() const { return mesh_; }
  int dimension() const { return f_.dimension(); }

private:
  detail::Trace run(double lambda, double s, bool stop) const;
  Nonlinearity f_;
  MeshPtr mesh_;
  detail::RadialKernel kernel_;
};

ShotResult integrate_ivp(double lambda, double s, const Nonlinearity& f, MeshPtr mesh);

struct LambdaSearch {
  double floor = 1e-6;
  double start_hi = 1.0;
  double growth = 4.0;
  double cap = 1e8;
  int monotone_probes = 8;
};

struct AmplitudeSolution {
  double lambda = 0.0;
  ShotResult shot;
  int iterations = 0;
  std::pair<double, double> bracket;
  bool monotone_bracket = true;
};

/// lambda(s) by bisection on the shooting terminal. Throws NoSolution when the
/// auto-expanded bracket leaves [floor, cap].
AmplitudeSolution solve_lambda_for_amplitude(double s, const BvpShooter& shooter,
                                             std::optional<std::pair<double, double>> bracket = {},
                                             double tol = 1e-12, const LambdaSearch& search = {});
AmplitudeSolution solve_lambda_for_amplitude(double s, const Nonlinearity& f, MeshPtr mesh,
                                             std::optional<std::pair<double, double>> bracket = {},
                                             double tol = 1e-12, const LambdaSearch& search = {});

/// Terminal strictly decreasing over `probes` log-spaced lambdas in [lo, hi].
bool validate_bracket_monotone(double s, const BvpShooter& shooter, double lo, double hi,
                               int probes = 8);

/// Log-spaced grid with the given density, endpoints included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct AmplitudeRoot {
  double s = 0.0;
  ShotResult shot;
};

/// All amplitudes s on the grid span with lambda(s) = lambda, polished by bisection in s.
std::vector<AmplitudeRoot> solve_amplitudes_for_lambda(double lambda, const BvpShooter& shooter,
                                                       std::span<const double> s_grid);
std::vector<AmplitudeRoot> solve_amplitudes_for_lambda(double lambda, const Nonlinearity& f,
                                                       MeshPtr mesh, std::span<const double> s_grid);

/// v and v' vanish together somewhere while v is not identically zero.
bool double_zero_check(const RadialProfile& v, double tol = 1e-6);
bool double_zero_check(const ShotResult& shot, double tol = 1e-6);

struct HygieneReport {
  bool double_zero = false;
  bool positive_interior = true;
  bool chord_bound = true;
  bool concave = true;
  bool flux_monotone = true;
  double worst_chord_gap = 0.0;   // min_i v_i - (1 - r_i/R) ||v||
  double worst_concavity = 0.0;   // max_i slope_{i+1} - slope_i
  double worst_flux_drop = 0.0;   // max_i w_i - w_{i+1}

  bool ok() const { return !double_zero && positive_interior && chord_bound && concave && flux_monotone; }
};

/// Chord bound, discrete concavity, flux monotonicity and the double-zero test.
HygieneReport check_hygiene(const ShotResult& shot, double tol = 1e-8);

} // namespace matool
