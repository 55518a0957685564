#include "matool/bvp.hpp"

#include "matool/error.hpp"
#include "matool/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>

namespace matool {

BvpShooter::BvpShooter(Nonlinearity f, MeshPtr mesh)
    : f_(std::move(f)), mesh_(std::move(mesh)),
      kernel_(detail::weight_kernel(*mesh_, static_cast<double>(f_.dimension()))) {}

detail::Trace BvpShooter::run(double lambda, double s, bool stop) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument(fmt::format("load lambda must be positive, got {}", lambda));
  if (!(s > 0.0) || !std::isfinite(s))
    throw InvalidArgument(fmt::format("amplitude must be positive, got {}", s));
  const int N = f_.dimension();
  const auto& f = f_;
  return detail::march(*mesh_, kernel_, std::pow(lambda, N), static_cast<double>(N), s,
                       [&f](double v) { return f(std::max(v, 0.0)); }, stop);
}

double BvpShooter::terminal(double lambda, double s) const {
  const auto t = run(lambda, s, true);
  if (!t.finite)
    return std::nan("");
  return detail::sentinel_terminal(t, mesh_->radius());
}

ShotResult BvpShooter::shoot(double lambda, double s) const {
  const auto t = run(lambda, s, false);
  if (!t.complete())
    throw ConvergenceError(fmt::format("IVP overflow at lambda={}, s={}", lambda, s));
  const int N = f_.dimension();
  ShotResult out;
  out.lambda = lambda;
  out.amplitude = s;
  out.profile = RadialProfile{mesh_, t.v, std::vector<double>(t.v.size())};
  for (std::size_t i = 0; i < t.v.size(); ++i)
    out.profile.dvalues[i] = -detail::signed_root(t.w[i], N);
  out.flux = t.w;
  out.hit_zero_at = t.first_zero;
  out.terminal = detail::sentinel_terminal(t, mesh_->radius());
  return out;
}

ShotResult integrate_ivp(double lambda, double s, const Nonlinearity& f, MeshPtr mesh) {
  return BvpShooter(f, std::move(mesh)).shoot(lambda, s);
}

bool validate_bracket_monotone(double s, const BvpShooter& shooter, double lo, double hi,
                               int probes) {
  if (probes < 2)
    return true;
  double prev = 0.0;
  for (int k = 0; k < probes; ++k) {
    const double lam = lo * std::pow(hi / lo, static_cast<double>(k) / (probes - 1));
    const double t = shooter.terminal(lam, s);
    if (!std::isfinite(t) || (k > 0 && !(t < prev)))
      return false;
    prev = t;
  }
  return true;
}

AmplitudeSolution solve_lambda_for_amplitude(double s, const BvpShooter& shooter,
                                             std::optional<std::pair<double, double>> bracket,
                                             double tol, const LambdaSearch& search) {
  auto T = [&](double lam) { return shooter.terminal(lam, s); };
  double lo, hi, t_lo, t_hi;
  if (bracket) {
    std::tie(lo, hi) = *bracket;
    if (!(lo > 0.0 && hi > lo))
      throw InvalidArgument("lambda bracket needs 0 < lo < hi");
    t_lo = T(lo);
    t_hi = T(hi);
    if (!(t_lo > 0.0 && t_hi < 0.0))
      throw BracketError(fmt::format("lambda bracket [{}, {}] does not straddle at s={}: terminals {} and {}",
                                     lo, hi, s, t_lo, t_hi),
                         t_lo, t_hi);
  } else {
    lo = search.floor;
    t_lo = T(lo);
    if (!(t_lo > 0.0))
      throw NoSolution(fmt::format("no solution at amplitude s={} within lambda-range: "
                                   "terminal {} already non-positive at lambda={}",
                                   s, t_lo, lo));
    hi = std::max(search.start_hi, lo * search.growth);
    t_hi = T(hi);
    while (!(t_hi < 0.0)) {
      if (!std::isfinite(t_hi))
        break;
      lo = hi;
      t_lo = t_hi;
      hi *= search.growth;
      if (hi > search.cap)
        throw NoSolution(fmt::format("no solution at amplitude s={} within lambda-range: "
                                     "terminal still positive at cap {}",
                                     s, search.cap));
      t_hi = T(hi);
    }
    if (!std::isfinite(t_hi))
      throw NoSolution(fmt::format("IVP overflow while bracketing at s={}, lambda={}", s, hi));
  }
  AmplitudeSolution out;
  out.bracket = {lo, hi};
  out.monotone_bracket = validate_bracket_monotone(s, shooter, lo, hi, search.monotone_probes);
  int it = 0;
  double lam = 0.5 * (lo + hi);
  for (; it < 400; ++it) {
    lam = hi / lo > 2.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(lam > lo && lam < hi))
      break;
    const double t = T(lam);
    if (!std::isfinite(t)) {
      hi = lam;
      continue;
    }
    if (t == 0.0)
      break;
    (t > 0.0 ? lo : hi) = lam;
    if (hi - lo <= tol * hi)
      break;
  }
  out.lambda = lam;
  out.iterations = it;
  out.shot = shooter.shoot(lam, s);
  return out;
}

AmplitudeSolution solve_lambda_for_amplitude(double s, const Nonlinearity& f, MeshPtr mesh,
                                             std::optional<std::pair<double, double>> bracket,
                                             double tol, const LambdaSearch& search) {
  return solve_lambda_for_amplitude(s, BvpShooter(f, std::move(mesh)), bracket, tol, search);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0 && hi > lo) || per_decade < 1)
    throw InvalidArgument("log grid needs 0 < lo < hi and a positive density");
  const double decades = std::log10(hi / lo);
  const int cells = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> g(cells + 1);
  for (int k = 0; k <= cells; ++k)
    g[k] = lo * std::pow(hi / lo, static_cast<double>(k) / cells);
  g.back() = hi;
  return g;
}

std::vector<AmplitudeRoot> solve_amplitudes_for_lambda(double lambda, const BvpShooter& shooter,
                                                       std::span<const double> s_grid) {
  if (s_grid.size() < 2)
    throw InvalidArgument("amplitude grid needs at least two points");
  const auto T = parallel_map(s_grid.size(), [&](std::size_t i) { return shooter.terminal(lambda, s_grid[i]); });
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i) {
    if (!std::isfinite(T[i]) || !std::isfinite(T[i + 1]))
      continue;
    if ((T[i] > 0.0) != (T[i + 1] > 0.0))
      cells.push_back(i);
  }
  auto roots = parallel_map(cells.size(), [&](std::size_t c) {
    const std::size_t i = cells[c];
    double lo = s_grid[i], hi = s_grid[i + 1];
    const bool lo_pos = T[i] > 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (!(mid > lo && mid < hi))
        break;
      const double t = shooter.terminal(lambda, mid);
      if (std::isfinite(t) && t == 0.0) {
        lo = hi = mid;
        break;
      }
      ((std::isfinite(t) && (t > 0.0) == lo_pos) ? lo : hi) = mid;
    }
    const double s = std::sqrt(lo * hi);
    return AmplitudeRoot{s, shooter.shoot(lambda, s)};
  });
  // merge roots closer than one grid cell (in log s)
  double min_cell = kInf;
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
    min_cell = std::min(min_cell, std::log(s_grid[i + 1] / s_grid[i]));
  std::vector<AmplitudeRoot> merged;
  for (auto& r : roots) {
    if (!merged.empty() && std::log(r.s / merged.back().s) < min_cell)
      continue;
    merged.push_back(std::move(r));
  }
  return merged;
}

std::vector<AmplitudeRoot> solve_amplitudes_for_lambda(double lambda, const Nonlinearity& f,
                                                       MeshPtr mesh, std::span<const double> s_grid) {
  return solve_amplitudes_for_lambda(lambda, BvpShooter(f, std::move(mesh)), s_grid);
}

bool double_zero_check(const RadialProfile& v, double tol) {
  v.check_consistent();
  const double vs = sup_norm(v.values);
  if (vs <= tol)
    return false;
  const double ds = std::max(sup_norm(v.dvalues), vs);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v.values[i]) <= tol * vs && std::abs(v.dvalues[i]) <= tol * ds)
      return true;
  return false;
}

bool double_zero_check(const ShotResult& shot, double tol) { return double_zero_check(shot.profile, tol); }

HygieneReport check_hygiene(const ShotResult& shot, double tol) {
  const auto& prof = shot.profile;
  prof.check_consistent();
  const auto& mesh = *prof.mesh;
  const auto& v = prof.values;
  const auto& r = mesh.nodes();
  const double R = mesh.radius();
  const double norm = sup_norm(prof);
  HygieneReport rep;
  rep.double_zero = double_zero_check(shot);
  rep.worst_chord_gap = kInf;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && !(v[i] > 0.0))
      rep.positive_interior = false;
    rep.worst_chord_gap = std::min(rep.worst_chord_gap, v[i] - (1.0 - r[i] / R) * norm);
  }
  rep.chord_bound = rep.worst_chord_gap >= -tol;
  double prev_slope = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double slope = (v[i + 1] - v[i]) / mesh.cell(i);
    if (i > 0)
      rep.worst_concavity = std::max(rep.worst_concavity, slope - prev_slope);
    prev_slope = slope;
  }
  rep.concave = rep.worst_concavity <= tol;
  const auto& w = shot.flux;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    rep.worst_flux_drop = std::max(rep.worst_flux_drop, w[i] - w[i + 1]);
  rep.flux_monotone = rep.worst_flux_drop <= 0.0 && !w.empty() && w.front() >= 0.0;
  return rep;
}

} // namespace matool
