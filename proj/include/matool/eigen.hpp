#pragma once

#include "matool/mesh.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace matool {

enum class EigenMethod { shooting, rayleigh };
std::string to_string(EigenMethod m);

/// Principal pair of -(phi_p(v'))' = mu^{p-1} (p-1) r^{p-2} a(r) phi_p(v), v'(0) = v(R) = 0.
struct Eigenpair {
  double mu1 = 0.0;
  RadialProfile eigenfunction; // sup norm 1
  EigenMethod method = EigenMethod::shooting;
  double p = 2.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct RayleighState {
  double f1 = 0.0;
  double f2 = 0.0;
  double quotient = 0.0;
};

/// Raw terminal value v(R) of the eigen IVP with v(0) = v0 (sign changes allowed).
double eigen_terminal(double p, double mu, const RadialMesh& mesh, double v0 = 1.0);

/// Terminal with the first-zero sentinel -(R - r_hat); strictly decreasing in mu.
double eigen_shooting_functional(double p, double mu, const RadialMesh& mesh, double v0 = 1.0);

/// Bisection on mu inside a bracket whose shooting functional changes sign.
Eigenpair eig_shoot(double p, MeshPtr mesh, std::pair<double, double> bracket, double tol = 1e-12,
                    double v0 = 1.0);
/// Same with an automatically expanded bracket.
Eigenpair eig_shoot(double p, MeshPtr mesh, double tol = 1e-12);

/// Discrete f1 = sum h (1/p)|dv/h|^p, f2 = ((p-1)/p) sum W r^{p-2} a |v|^p.
RayleighState rayleigh_state(double p, const RadialMesh& mesh, std::span<const double> values);

/// Minimizes f1/f2 over profiles with v(R) = 0 by preconditioned normalized descent.
Eigenpair eig_rayleigh(double p, MeshPtr mesh, double tol = 1e-13, int max_iter = 5000);

struct Lambda1Report {
  double shooting = 0.0;
  double rayleigh = 0.0;
  double relative_gap = 0.0;
  Eigenpair shoot_pair;
  Eigenpair rayleigh_pair;
};

/// lambda_1 = mu_1(N + 1) by both methods.
Lambda1Report lambda1_report(int N, MeshPtr mesh);

/// lambda_1 from shooting; throws ConvergenceError when the Rayleigh value disagrees beyond cross_tol.
double lambda1(int N, MeshPtr mesh, double cross_tol = 1e-4);

struct MuScanRow {
  double p = 0.0;
  double mu1 = 0.0;
};

struct MuScan {
  std::vector<MuScanRow> rows;
  double max_jump = 0.0;
};

MuScan mu1_scan(std::span<const double> p_grid, MeshPtr mesh, double p_max = 64.0);

struct MuScanCheck {
  bool small_steps = true; // |mu_{i+1} - mu_i| < step_frac * mu_i
  bool no_spikes = true;   // no jump against the trend above spike_factor * median, none above spike_factor * both neighbours
  double worst_step = 0.0; // max |mu_{i+1} - mu_i| / mu_i
  std::vector<std::size_t> spikes;
};

MuScanCheck check_mu_scan(const MuScan& scan, double step_frac = 0.05, double spike_factor = 5.0);

/// Strictly positive and strictly negative values beyond the dead band.
bool sign_change_check(const RadialProfile& v, double dead_band = 1e-12);

/// Sign changes among nodes r_0 .. r_{n-2}, ignoring |v| within the dead band.
std::size_t interior_zero_count(std::span<const double> values, double dead_band = 1e-12);

} // namespace matool
