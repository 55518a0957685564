#include "matool/operators.hpp"

#include "matool/detail/radial_ivp.hpp"
#include "matool/error.hpp"

#include <cmath>
#include <fmt/core.h>

namespace matool {

double phi_p(double s, double p) {
  if (s == 0.0)
    return 0.0;
  if (p == 2.0)
    return s;
  return std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

double dual_exponent(double p) {
  if (!(p > 1.0))
    throw InvalidArgument("dual exponent needs p > 1");
  return p / (p - 1.0);
}

std::string to_string(OperatorKind k) {
  switch (k) {
  case OperatorKind::T_mu_p:
    return "T_mu_p";
  case OperatorKind::T_g:
    return "T_g";
  case OperatorKind::T_N:
    return "T_N";
  case OperatorKind::T_f:
    return "T_f";
  }
  return {};
}

void OperatorSpec::validate() const {
  if (!mesh)
    throw InvalidArgument("operator spec without mesh");
  if (!(mu_or_lambda > 0.0))
    throw InvalidArgument("operator load parameter must be positive");
  if (kind == OperatorKind::T_mu_p && !(p >= 2.0))
    throw InvalidArgument("T_mu_p needs p >= 2");
  if (kind != OperatorKind::T_mu_p && N < 1)
    throw InvalidArgument("operator needs N >= 1");
  if ((kind == OperatorKind::T_f || kind == OperatorKind::T_g) && !nonlinearity)
    throw InvalidArgument(fmt::format("{} needs a nonlinearity", to_string(kind)));
}

RadialProfile apply_operator(const OperatorSpec& spec, const RadialProfile& v) {
  spec.validate();
  v.check_consistent();
  if (v.mesh != spec.mesh && v.mesh->nodes() != spec.mesh->nodes())
    throw InvalidArgument("profile and operator live on different meshes");
  const RadialMesh& mesh = *spec.mesh;
  const auto& r = mesh.nodes();
  const auto& a = mesh.a_values();
  const std::size_t n = mesh.size();

  std::vector<double> integrand(n);
  double outer_scale = 1.0;
  double root = 1.0;
  if (spec.kind == OperatorKind::T_mu_p) {
    const double p = spec.p;
    const double load = std::pow(spec.mu_or_lambda, p - 1.0) * (p - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double rw = p == 2.0 ? 1.0 : (r[i] == 0.0 ? 0.0 : std::pow(r[i], p - 2.0));
      integrand[i] = load * rw * a[i] * phi_p(v.values[i], p);
    }
    root = p - 1.0;
  } else {
    const int N = spec.N;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = v.values[i];
      if (x < 0.0)
        throw InvalidArgument(
            fmt::format("{} needs a non-negative input (value {} at r={})", to_string(spec.kind), x, r[i]));
      double F = 0.0;
      switch (spec.kind) {
      case OperatorKind::T_N:
        F = std::pow(x, N);
        break;
      case OperatorKind::T_f:
        F = (*spec.nonlinearity)(x);
        break;
      case OperatorKind::T_g:
        F = std::pow(x, N) + (*spec.nonlinearity)(x);
        break;
      default:
        break;
      }
      const double rw = N == 1 ? 1.0 : N * std::pow(r[i], N - 1);
      integrand[i] = rw * a[i] * F;
    }
    outer_scale = spec.mu_or_lambda;
    root = N;
  }

  // inner prefix integral, then the root map, then the suffix integral
  std::vector<double> inner(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    inner[i + 1] = inner[i] + 0.5 * mesh.cell(i) * (integrand[i] + integrand[i + 1]);
  std::vector<double> G(n);
  for (std::size_t i = 0; i < n; ++i)
    G[i] = outer_scale * detail::signed_root(inner[i], root);

  RadialProfile out{spec.mesh, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = n - 1; i-- > 0;)
    out.values[i] = out.values[i + 1] + 0.5 * mesh.cell(i) * (G[i] + G[i + 1]);
  for (std::size_t i = 0; i < n; ++i)
    out.dvalues[i] = -G[i];
  return out;
}

PicardResult picard_iterate(const OperatorSpec& spec, const RadialProfile& v0, double theta,
                            double tol, int max_iter, double divergence_cap) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw InvalidArgument("Picard damping must lie in (0, 1]");
  if (!(tol > 0.0) || max_iter < 1)
    throw InvalidArgument("Picard needs tol > 0 and max_iter >= 1");
  PicardResult res{v0, false, 0, 0.0, {}};
  for (int k = 1; k <= max_iter; ++k) {
    RadialProfile next = apply_operator(spec, res.profile);
    double update = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double vi = (1.0 - theta) * res.profile.values[i] + theta * next.values[i];
      const double di = (1.0 - theta) * res.profile.dvalues[i] + theta * next.dvalues[i];
      update = std::max(update, std::abs(vi - res.profile.values[i]));
      res.profile.values[i] = vi;
      res.profile.dvalues[i] = di;
    }
    res.iterations = k;
    res.last_update = update;
    const double norm = sup_norm(res.profile);
    if (!std::isfinite(norm) || norm > divergence_cap) {
      res.diagnostic = fmt::format("diverged: sup norm {:.3e} exceeds cap {:.3e} after {} sweeps",
                                   norm, divergence_cap, k);
      return res;
    }
    if (update < tol) {
      res.converged = true;
      return res;
    }
  }
  res.diagnostic = fmt::format("no convergence after {} sweeps (last update {:.3e})", max_iter,
                               res.last_update);
  return res;
}

} // namespace matool
