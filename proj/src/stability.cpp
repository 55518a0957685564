#include "matool/stability.hpp"

#include "matool/detail/radial_ivp.hpp"
#include "matool/eigen.hpp"
#include "matool/error.hpp"
#include "matool/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>

namespace matool {

namespace {

double safe_derivative(const Nonlinearity& f, double v, double scale) {
  double d = f.derivative(std::max(v, 0.0));
  if (!std::isfinite(d))
    d = f.derivative(1e-12 * scale);
  return d;
}

} // namespace

LinearizedProblem linearize(const ShotResult& base, const Nonlinearity& f) {
  base.profile.check_consistent();
  const double R = base.profile.mesh->radius();
  if ((base.hit_zero_at && R - *base.hit_zero_at > 1e-8 * R) || !(base.lambda > 0.0))
    throw InvalidArgument("linearization needs an accepted positive solution");
  const auto& mesh = *base.profile.mesh;
  const int N = f.dimension();
  LinearizedProblem lp{base, f, {}, {}, N, base.lambda};
  const std::size_t n = mesh.size();
  lp.q.resize(n);
  lp.c.resize(n);
  const double lamN = std::pow(base.lambda, N);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::max(base.flux[i], 0.0);
    lp.q[i] = N == 1 ? 1.0 : std::pow(w, (N - 1.0) / N);
    const double rN = N == 1 ? 1.0 : std::pow(mesh.node(i), N - 1);
    lp.c[i] = lamN * rN * mesh.a_values()[i] * safe_derivative(f, base.profile.values[i], base.amplitude);
  }
  if (N > 1)
    lp.q[0] = 0.0;
  return lp;
}

LinearizedShot linearized_shoot(const LinearizedProblem& lp, double mu, bool stop_at_zero) {
  const auto& mesh = *lp.base.profile.mesh;
  const auto& r = mesh.nodes();
  const WeightFunction a = mesh.weight();
  const std::size_t n = mesh.size();
  const int N = lp.N;
  const double lamN = std::pow(lp.lambda, N);
  const double s = lp.base.amplitude;
  const auto& f = lp.f;
  auto rpow = [N](double x) { return N == 1 ? 1.0 : std::pow(x, N - 1); };
  auto qof = [N](double w) { return N == 1 ? 1.0 : std::pow(std::max(w, 0.0), (N - 1.0) / N); };

  LinearizedShot out;
  out.phi.assign(n, std::nan(""));
  out.flux.assign(n, std::nan(""));
  out.phi[0] = 1.0;
  out.flux[0] = 0.0;

  // startup on [0, r1] from the leading-order expansion
  {
    const auto& g = detail::gauss8();
    const double fs = f(s), dfs = safe_derivative(f, s, s);
    auto psi = [&](double t) { return lamN * dfs * a.radial_moment(N, t) / N + mu * std::pow(t, N) / (N * N); };
    auto qq = [&](double t) { return qof(lamN * fs * a.radial_moment(N, t)); };
    const double r1 = r[1];
    double acc = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double t = r1 * g.x[j];
      acc += g.w[j] * psi(t) / qq(t);
    }
    out.phi[1] = 1.0 - acc * r1;
    out.flux[1] = psi(r1);
  }

  const auto& v = lp.base.profile.values;
  const auto& w = lp.base.flux;
  double vv = v[1], ww = w[1];
  std::size_t i = 1;
  auto locate = [&](std::size_t k) {
    if (!out.first_zero && out.phi[k] > 0.0 && out.phi[k + 1] <= 0.0) {
      const double d0 = -out.flux[k] / lp.q[k];
      const double d1 = -out.flux[k + 1] / lp.q[k + 1];
      out.first_zero = detail::hermite_zero(r[k], r[k + 1] - r[k], out.phi[k], out.phi[k + 1], d0, d1);
    }
  };
  locate(0);
  if (!(stop_at_zero && out.first_zero)) {
    for (; i + 1 < n; ++i) {
      const double h = r[i + 1] - r[i];
      const double rm = r[i] + 0.5 * h;
      auto rhs = [&](double rr, double V, double W, double P, double S, double out4[4]) {
        const double base = rpow(rr) * a(rr);
        out4[0] = -detail::signed_root(W, N);
        out4[1] = lamN * N * base * f(std::max(V, 0.0));
        out4[2] = -S / qof(W);
        out4[3] = (lamN * base * safe_derivative(f, V, s) + mu * rpow(rr) / N) * P;
      };
      double k1[4], k2[4], k3[4], k4[4];
      const double P = out.phi[i], S = out.flux[i];
      rhs(r[i], vv, ww, P, S, k1);
      rhs(rm, vv + 0.5 * h * k1[0], ww + 0.5 * h * k1[1], P + 0.5 * h * k1[2], S + 0.5 * h * k1[3], k2);
      rhs(rm, vv + 0.5 * h * k2[0], ww + 0.5 * h * k2[1], P + 0.5 * h * k2[2], S + 0.5 * h * k2[3], k3);
      rhs(r[i + 1], vv + h * k3[0], ww + h * k3[1], P + h * k3[2], S + h * k3[3], k4);
      vv += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      ww += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      out.phi[i + 1] = P + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
      out.flux[i + 1] = S + h / 6.0 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3]);
      if (!std::isfinite(out.phi[i + 1]) || !std::isfinite(out.flux[i + 1]))
        throw ConvergenceError(fmt::format("linearized IVP overflow at mu={}", mu));
      locate(i);
      if (stop_at_zero && out.first_zero)
        break;
    }
  }
  out.terminal = out.first_zero ? -(mesh.radius() - *out.first_zero) : out.phi.back();
  return out;
}

PrincipalMode linearized_principal_mode(const LinearizedProblem& lp,
                                        std::optional<std::pair<double, double>> bracket, double tol) {
  auto T = [&](double mu) { return linearized_shoot(lp, mu, true).terminal; };
  double lo, hi;
  if (bracket) {
    std::tie(lo, hi) = *bracket;
    const double tl = T(lo), th = T(hi);
    if (!(tl > 0.0 && th < 0.0))
      throw BracketError(fmt::format("linearized bracket [{}, {}] does not straddle: {} and {}", lo, hi, tl, th),
                         tl, th);
  } else {
    lo = -1.0;
    hi = 1.0;
    while (!(T(lo) > 0.0)) {
      hi = std::min(hi, lo);
      lo *= 4.0;
      if (lo < -1e14)
        throw BracketError("no lower bracket for the linearized eigenvalue", 0.0, 0.0);
    }
    while (!(T(hi) < 0.0)) {
      lo = std::max(lo, hi);
      hi *= 4.0;
      if (hi > 1e14)
        throw BracketError("no upper bracket for the linearized eigenvalue", 0.0, 0.0);
    }
  }
  int it = 0;
  for (; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi) || hi - lo <= tol * std::max(1.0, std::abs(mid)))
      break;
    (T(mid) > 0.0 ? lo : hi) = mid;
  }
  PrincipalMode mode;
  mode.mu = 0.5 * (lo + hi);
  mode.iterations = it;
  const auto shot = linearized_shoot(lp, mode.mu, false);
  const auto& mesh_ptr = lp.base.profile.mesh;
  mode.eigenfunction = RadialProfile{mesh_ptr, shot.phi, std::vector<double>(shot.phi.size(), 0.0)};
  for (std::size_t k = 1; k < shot.phi.size(); ++k)
    mode.eigenfunction.dvalues[k] = -shot.flux[k] / lp.q[k];
  if (interior_zero_count(shot.phi, 1e-9) != 0)
    throw ConvergenceError(fmt::format("linearized mode at mu={} has an interior zero", mode.mu));
  return mode;
}

double linearized_principal_eig(const LinearizedProblem& lp,
                                std::optional<std::pair<double, double>> bracket, double tol) {
  return linearized_principal_mode(lp, bracket, tol).mu;
}

MorseResult morse_index(const LinearizedProblem& lp, double degenerate_tol) {
  const auto shot = linearized_shoot(lp, 0.0, false);
  const auto& phi = shot.phi;
  const double norm = sup_norm(phi);
  MorseResult res;
  res.index = static_cast<int>(interior_zero_count(phi, 1e-12 * norm));
  res.terminal = phi.back() / norm;
  res.degenerate = std::abs(res.terminal) <= degenerate_tol;
  if (!res.degenerate) {
    double last = 0.0;
    for (std::size_t k = phi.size() - 1; k-- > 0;)
      if (std::abs(phi[k]) > 1e-12 * norm) {
        last = phi[k];
        break;
      }
    if ((last > 0.0) != (phi.back() > 0.0))
      ++res.index;
  }
  return res;
}

StabilityCondition stability_condition_check(const Nonlinearity& f, double s_max, double s_min,
                                             int per_decade) {
  StabilityCondition out;
  const int N = f.dimension();
  for (double s : log_grid(s_min, s_max, per_decade)) {
    const double d = f.derivative(s);
    if (!std::isfinite(d))
      throw ConvergenceError(fmt::format("derivative evaluation failed at s={}", s));
    const double g = d * s - N * f(s);
    if (!(g < -1e-12 * N * f(s))) {
      out.holds = false;
      out.first_violation = s;
      return out;
    }
  }
  return out;
}

IdentityCheck stability_identity(const LinearizedProblem& lp, const PrincipalMode& mode) {
  const auto& mesh = *lp.base.profile.mesh;
  const auto& v = lp.base.profile.values;
  const auto& phi = mode.eigenfunction.values;
  const int N = lp.N;
  const double lamN = std::pow(lp.lambda, N);
  const std::size_t n = mesh.size();
  std::vector<double> left(n), right(n), magnitude(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rN = N == 1 ? 1.0 : std::pow(mesh.node(i), N - 1);
    const double vi = std::max(v[i], 0.0);
    left[i] = rN * phi[i] * v[i];
    const double weight = lamN * rN * mesh.a_values()[i] * phi[i];
    const double Nf = N * lp.f(vi), dfv = safe_derivative(lp.f, vi, lp.base.amplitude) * vi;
    right[i] = weight * (Nf - dfv);
    magnitude[i] = std::abs(weight) * (std::abs(Nf) + std::abs(dfv));
  }
  const QuadRule rule = mesh.simpson_capable() ? QuadRule::simpson : QuadRule::trapezoid;
  IdentityCheck out;
  out.lhs = mode.mu * mesh.integrate(left, rule);
  out.rhs = N * mesh.integrate(right, rule);
  const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), N * mesh.integrate(magnitude, rule), 1e-300});
  out.relative = std::abs(out.lhs - out.rhs) / scale;
  return out;
}

MonotonicityReport branch_monotonicity(const Branch& branch, double tol, double tie_tol) {
  MonotonicityReport rep;
  const auto& pts = branch.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double l0 = pts[i].lambda, l1 = pts[i + 1].lambda;
    if (std::abs(l1 - l0) <= tie_tol * std::max(l0, l1)) {
      rep.resolution_failures.push_back({i, "tie", l1 - l0});
      continue;
    }
    if (l1 < l0) {
      rep.violations.push_back({i, "lambda-order", l1 - l0});
      continue;
    }
    const auto& va = branch.profile(pts[i]).profile.values;
    const auto& vb = branch.profile(pts[i + 1]).profile.values;
    double worst = 0.0;
    for (std::size_t k = 0; k < va.size(); ++k)
      worst = std::max(worst, va[k] - vb[k]);
    if (worst > tol)
      rep.violations.push_back({i, "pointwise", worst});
  }
  rep.monotone = rep.violations.empty();
  return rep;
}

std::vector<std::optional<IdentityCheck>> annotate_stability(Branch& branch, bool with_identity) {
  struct Result {
    std::optional<double> mu;
    std::optional<int> morse;
    std::optional<IdentityCheck> identity;
  };
  auto results = parallel_map(branch.points.size(), [&](std::size_t i) {
    Result r;
    try {
      const auto lp = linearize(branch.profile(branch.points[i]), branch.spec);
      r.morse = morse_index(lp).index;
      const auto mode = linearized_principal_mode(lp);
      r.mu = mode.mu;
      if (with_identity)
        r.identity = stability_identity(lp, mode);
    } catch (const Error&) {
    }
    return r;
  });
  std::vector<std::optional<IdentityCheck>> identities;
  for (std::size_t i = 0; i < results.size(); ++i) {
    branch.points[i].principal_eig = results[i].mu;
    branch.points[i].morse_index = results[i].morse;
    identities.push_back(results[i].identity);
  }
  return identities;
}

BifurcationDirection bifurcation_direction(const Branch& branch, const RadialProfile& psi1, std::size_t count) {
  psi1.check_consistent();
  std::vector<const BranchPoint*> pts;
  for (const auto& p : branch.points)
    if (!p.refined)
      pts.push_back(&p);
  if (pts.size() < count || count < 2)
    throw InvalidArgument(fmt::format("bifurcation check needs {} branch points, have {}", count, pts.size()));
  const double top = psi1.values.front();
  if (!(top > 0.0))
    throw InvalidArgument("principal eigenfunction must be positive at the origin");
  BifurcationDirection out;
  for (std::size_t k = 0; k < count; ++k) {
    const auto& v = branch.profile(*pts[k]).profile;
    if (v.size() != psi1.size())
      throw InvalidArgument("eigenfunction and branch live on different meshes");
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      d = std::max(d, std::abs(v.values[i] / pts[k]->s - psi1.values[i] / top));
    out.amplitudes.push_back(pts[k]->s);
    out.distances.push_back(d);
  }
  out.decreasing = true;
  for (std::size_t k = 1; k < count; ++k)
    out.decreasing = out.decreasing && out.distances[k - 1] < out.distances[k];
  return out;
}

} // namespace matool
