#include "matool/eigen.hpp"

#include "matool/detail/radial_ivp.hpp"
#include "matool/error.hpp"
#include "matool/operators.hpp"
#include "matool/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <numeric>

namespace matool {

namespace {

void require_exponent(double p) {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw InvalidArgument(fmt::format("exponent p must be >= 2, got {}", p));
}

detail::Trace eigen_march(double p, double mu, const RadialMesh& mesh,
                          const detail::RadialKernel& kernel, double v0, bool stop) {
  const double q = p - 1.0;
  return detail::march(mesh, kernel, std::pow(mu, q), q, v0, [p](double v) { return phi_p(v, p); },
                       stop);
}

RadialProfile trace_profile(const MeshPtr& mesh, const detail::Trace& t, double q) {
  RadialProfile out{mesh, t.v, std::vector<double>(t.v.size())};
  for (std::size_t i = 0; i < t.v.size(); ++i)
    out.dvalues[i] = -detail::signed_root(t.w[i], q);
  return out;
}

void normalize_sup(RadialProfile& prof) {
  const double s = sup_norm(prof);
  if (s > 0.0) {
    for (auto& x : prof.values)
      x /= s;
    for (auto& x : prof.dvalues)
      x /= s;
  }
}

} // namespace

std::string to_string(EigenMethod m) { return m == EigenMethod::shooting ? "shooting" : "rayleigh"; }

double eigen_terminal(double p, double mu, const RadialMesh& mesh, double v0) {
  require_exponent(p);
  const auto kernel = detail::weight_kernel(mesh, p - 1.0);
  const auto t = eigen_march(p, mu, mesh, kernel, v0, false);
  if (!t.complete())
    throw ConvergenceError("eigen IVP blew up");
  return t.v.back();
}

double eigen_shooting_functional(double p, double mu, const RadialMesh& mesh, double v0) {
  require_exponent(p);
  const auto kernel = detail::weight_kernel(mesh, p - 1.0);
  const auto t = eigen_march(p, mu, mesh, kernel, v0, true);
  return detail::sentinel_terminal(t, mesh.radius());
}

Eigenpair eig_shoot(double p, MeshPtr mesh, std::pair<double, double> bracket, double tol,
                    double v0) {
  require_exponent(p);
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo))
    throw InvalidArgument("eigen bracket needs 0 < mu_lo < mu_hi");
  const auto kernel = detail::weight_kernel(*mesh, p - 1.0);
  const double R = mesh->radius();
  auto T = [&](double mu) {
    return detail::sentinel_terminal(eigen_march(p, mu, *mesh, kernel, v0, true), R);
  };
  const double t_lo = T(lo), t_hi = T(hi);
  if (!(t_lo > 0.0 && t_hi < 0.0))
    throw BracketError(fmt::format("eigen bracket [{}, {}] does not straddle: terminal values {} and {}",
                                   lo, hi, t_lo, t_hi),
                       t_lo, t_hi);
  int it = 0;
  double mid = 0.5 * (lo + hi);
  for (; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double t = T(mid);
    if (std::abs(t) < tol * v0)
      break;
    (t > 0.0 ? lo : hi) = mid;
  }
  const auto full = eigen_march(p, mid, *mesh, kernel, v0, false);
  if (!full.complete())
    throw ConvergenceError("eigen IVP blew up at the converged mu");
  Eigenpair out;
  out.mu1 = mid;
  out.p = p;
  out.method = EigenMethod::shooting;
  out.iterations = it;
  out.eigenfunction = trace_profile(mesh, full, p - 1.0);
  out.residual = std::abs(full.v.back()) / v0;
  if (interior_zero_count(out.eigenfunction.values, 1e-12 * v0) != 0)
    throw ConvergenceError(fmt::format("eigenfunction at mu={} has an interior zero: not the principal mode", mid));
  out.eigenfunction.values.back() = 0.0;
  normalize_sup(out.eigenfunction);
  return out;
}

Eigenpair eig_shoot(double p, MeshPtr mesh, double tol) {
  require_exponent(p);
  double lo = 1.0, hi = 1.0;
  while (eigen_shooting_functional(p, lo, *mesh) <= 0.0) {
    lo *= 0.25;
    if (lo < 1e-14)
      throw BracketError("no lower eigen bracket found", 0.0, 0.0);
  }
  while (eigen_shooting_functional(p, hi, *mesh) > 0.0) {
    hi *= 4.0;
    if (hi > 1e14)
      throw BracketError("no upper eigen bracket found", 0.0, 0.0);
  }
  if (lo == hi)
    lo = hi * 0.25;
  return eig_shoot(p, mesh, {lo, hi}, tol);
}

RayleighState rayleigh_state(double p, const RadialMesh& mesh, std::span<const double> v) {
  require_exponent(p);
  if (v.size() != mesh.size())
    throw InvalidArgument("Rayleigh candidate length mismatch");
  const auto& r = mesh.nodes();
  const auto& a = mesh.a_values();
  const auto& W = mesh.weights();
  RayleighState st;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double h = mesh.cell(i);
    st.f1 += h * std::pow(std::abs((v[i + 1] - v[i]) / h), p) / p;
  }
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double rw = p == 2.0 ? 1.0 : std::pow(r[i], p - 2.0);
    st.f2 += W[i] * rw * a[i] * std::pow(std::abs(v[i]), p);
  }
  st.f2 *= (p - 1.0) / p;
  st.quotient = st.f2 > 0.0 ? st.f1 / st.f2 : kInf;
  return st;
}

Eigenpair eig_rayleigh(double p, MeshPtr mesh_ptr, double tol, int max_iter) {
  require_exponent(p);
  const RadialMesh& mesh = *mesh_ptr;
  const std::size_t n = mesh.size();
  const std::size_t m = n - 1; // free unknowns, v_{n-1} = 0
  const auto& r = mesh.nodes();
  const double R = mesh.radius();
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i)
    rho[i] = (p == 2.0 ? 1.0 : std::pow(r[i], p - 2.0)) * mesh.a_values()[i] * mesh.weights()[i];
  if (std::all_of(rho.begin(), rho.end() - 1, [](double x) { return x == 0.0; }))
    throw InvalidArgument("Rayleigh quotient undefined: weight vanishes on the mesh");

  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    x[i] = 1.0 - (r[i] / R) * (r[i] / R);

  auto quotient = [&](const std::vector<double>& v) { return rayleigh_state(p, mesh, v).quotient; };
  auto normalize = [&](std::vector<double>& v) {
    for (auto& e : v)
      e = std::abs(e);
    v[n - 1] = 0.0;
    const double f2 = rayleigh_state(p, mesh, v).f2;
    const double s = std::pow(f2, -1.0 / p);
    for (auto& e : v)
      e *= s;
  };
  normalize(x);

  std::vector<double> d(m), g(m), c(m), z(m), diag(m), off(m), trial(n);
  double Q = quotient(x);
  double last_rel = kInf;
  int it = 0;
  bool converged = false;
  int quiet = 0;
  for (; it < max_iter; ++it) {
    double dmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = (x[i + 1] - x[i]) / mesh.cell(i);
      dmax = std::max(dmax, std::abs(d[i]));
    }
    const double delta = 1e-8 * dmax;
    // gradient of f1 - Q f2 (scaled gradient of the quotient since f2 = 1)
    for (std::size_t j = 0; j < m; ++j) {
      const double left = j > 0 ? phi_p(d[j - 1], p) : 0.0;
      g[j] = left - phi_p(d[j], p) - Q * (p - 1.0) * rho[j] * phi_p(x[j], p);
    }
    for (std::size_t i = 0; i < m; ++i)
      c[i] = std::pow(std::max(std::abs(d[i]), delta), p - 2.0) / mesh.cell(i);
    for (std::size_t j = 0; j < m; ++j) {
      diag[j] = c[j] + (j > 0 ? c[j - 1] : 0.0);
      off[j] = j + 1 < m ? -c[j] : 0.0;
    }
    // Thomas solve of the Kacanov stiffness system
    std::vector<double> cp(m), dp(m);
    cp[0] = off[0] / diag[0];
    dp[0] = g[0] / diag[0];
    for (std::size_t j = 1; j < m; ++j) {
      const double den = diag[j] - off[j - 1] * cp[j - 1];
      cp[j] = off[j] / den;
      dp[j] = (g[j] - off[j - 1] * dp[j - 1]) / den;
    }
    z[m - 1] = dp[m - 1];
    for (std::size_t j = m - 1; j-- > 0;)
      z[j] = dp[j] - cp[j] * z[j + 1];

    double slope = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      slope += g[j] * z[j];
    if (!(slope > 0.0)) {
      converged = true;
      break;
    }
    double alpha = 1.0;
    double Qt = kInf;
    while (alpha > 1e-12) {
      for (std::size_t j = 0; j < m; ++j)
        trial[j] = x[j] - alpha * z[j];
      trial[n - 1] = 0.0;
      Qt = quotient(trial);
      if (Qt <= Q - 1e-4 * alpha * slope)
        break;
      alpha *= 0.5;
    }
    if (!(Qt < Q)) {
      converged = last_rel <= 1e3 * tol;
      break;
    }
    normalize(trial);
    Qt = quotient(trial);
    last_rel = (Q - Qt) / Qt;
    x.swap(trial);
    Q = Qt;
    if (last_rel < tol) {
      if (++quiet >= 3) {
        converged = true;
        ++it;
        break;
      }
    } else {
      quiet = 0;
    }
  }

  Eigenpair out;
  out.method = EigenMethod::rayleigh;
  out.p = p;
  out.mu1 = std::pow(Q, 1.0 / (p - 1.0));
  out.iterations = it;
  out.residual = std::isfinite(last_rel) ? last_rel : 0.0;
  out.converged = converged;
  RadialProfile prof{mesh_ptr, x, std::vector<double>(n, 0.0)};
  for (std::size_t i = 1; i + 1 < n; ++i)
    prof.dvalues[i] = (x[i + 1] - x[i - 1]) / (r[i + 1] - r[i - 1]);
  prof.dvalues[n - 1] = (x[n - 1] - x[n - 2]) / mesh.cell(n - 2);
  normalize_sup(prof);
  out.eigenfunction = std::move(prof);
  return out;
}

Lambda1Report lambda1_report(int N, MeshPtr mesh) {
  if (N < 1)
    throw InvalidArgument("lambda1 needs N >= 1");
  const double p = N + 1.0;
  Lambda1Report rep;
  rep.shoot_pair = eig_shoot(p, mesh);
  rep.rayleigh_pair = eig_rayleigh(p, mesh);
  rep.shooting = rep.shoot_pair.mu1;
  rep.rayleigh = rep.rayleigh_pair.mu1;
  rep.relative_gap = std::abs(rep.shooting - rep.rayleigh) / rep.shooting;
  return rep;
}

double lambda1(int N, MeshPtr mesh, double cross_tol) {
  const auto rep = lambda1_report(N, mesh);
  if (!rep.rayleigh_pair.converged || rep.relative_gap > cross_tol)
    throw ConvergenceError(fmt::format(
        "lambda1 cross-check failed: shooting {:.10g}, rayleigh {:.10g} (relative gap {:.3e})",
        rep.shooting, rep.rayleigh, rep.relative_gap));
  return rep.shooting;
}

MuScan mu1_scan(std::span<const double> p_grid, MeshPtr mesh, double p_max) {
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 2.0 && p_grid[i] <= p_max))
      throw InvalidArgument(fmt::format("p grid value {} outside [2, {}]", p_grid[i], p_max));
    if (i > 0 && p_grid[i] < p_grid[i - 1])
      throw InvalidArgument("p grid must be non-decreasing");
  }
  MuScan scan;
  auto vals = parallel_map(p_grid.size(), [&](std::size_t i) { return eig_shoot(p_grid[i], mesh).mu1; });
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    scan.rows.push_back({p_grid[i], vals[i]});
    if (i > 0)
      scan.max_jump = std::max(scan.max_jump, std::abs(vals[i] - vals[i - 1]));
  }
  return scan;
}

MuScanCheck check_mu_scan(const MuScan& scan, double step_frac, double spike_factor) {
  MuScanCheck out;
  const auto& rows = scan.rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::abs(rows[i].mu1 - rows[i - 1].mu1);
    const double rel = d / rows[i - 1].mu1;
    out.worst_step = std::max(out.worst_step, rel);
    if (!(rel < step_frac))
      out.small_steps = false;
  }
  std::vector<double> mags;
  for (std::size_t i = 1; i < rows.size(); ++i)
    mags.push_back(std::abs(rows[i].mu1 - rows[i - 1].mu1));
  if (mags.size() >= 2) {
    auto sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double trend = rows.back().mu1 - rows.front().mu1;
    for (std::size_t i = 0; i < mags.size(); ++i) {
      const double d = rows[i + 1].mu1 - rows[i].mu1;
      const double left = i > 0 ? mags[i - 1] : 0.0;
      const double right = i + 1 < mags.size() ? mags[i + 1] : 0.0;
      const bool against = d * trend < 0.0 && mags[i] > spike_factor * median;
      const bool isolated = mags[i] > spike_factor * std::max(left, right);
      if ((against || isolated) && mags[i] > 1e-12 * std::abs(rows[i].mu1))
        out.spikes.push_back(i);
    }
  }
  out.no_spikes = out.spikes.empty();
  return out;
}

bool sign_change_check(const RadialProfile& v, double dead_band) {
  const double band = dead_band * std::max(1.0, sup_norm(v));
  bool pos = false, neg = false;
  for (double x : v.values) {
    pos = pos || x > band;
    neg = neg || x < -band;
  }
  return pos && neg;
}

std::size_t interior_zero_count(std::span<const double> values, double dead_band) {
  int sign = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double x = values[i];
    if (std::abs(x) <= dead_band)
      continue;
    const int s = x > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign)
      ++count;
    sign = s;
  }
  return count;
}

} // namespace matool
