#pragma once

#include "matool/mesh.hpp"
#include "matool/nonlinearity.hpp"

#include <optional>
#include <string>

namespace matool {

/// |s|^{p-2} s, with phi_p(0) = 0 for every p.
double phi_p(double s, double p);

/// Dual exponent p / (p - 1).
double dual_exponent(double p);

enum class OperatorKind { T_mu_p, T_g, T_N, T_f };

std::string to_string(OperatorKind k);

/// T_mu_p : v -> \int_r^R phi_{p'}(\int_0^s mu^{p-1} (p-1) t^{p-2} a phi_p(v) dt) ds.
/// The nonnegative kinds return lambda * \int_r^R (\int_0^s N t^{N-1} a F(v) dt)^{1/N} ds with
/// F = v^N (T_N), f(v) (T_f) or v^N + g(v) (T_g).
struct OperatorSpec {
  OperatorKind kind = OperatorKind::T_N;
  double p = 2.0;
  int N = 1;
  double mu_or_lambda = 1.0;
  std::optional<Nonlinearity> nonlinearity;
  MeshPtr mesh;

  void validate() const;
};

RadialProfile apply_operator(const OperatorSpec& spec, const RadialProfile& v);

struct PicardResult {
  RadialProfile profile;
  bool converged = false;
  int iterations = 0;
  double last_update = 0.0;
  std::string diagnostic;
};

/// v_{k+1} = (1 - theta) v_k + theta Op(v_k) until the sup-norm update drops below tol.
PicardResult picard_iterate(const OperatorSpec& spec, const RadialProfile& v0, double theta = 0.7,
                            double tol = 1e-10, int max_iter = 20000, double divergence_cap = 1e12);

} // namespace matool
