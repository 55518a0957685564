#include "matool/compare.hpp"

#include "matool/detail/radial_ivp.hpp"
#include "matool/eigen.hpp"
#include "matool/error.hpp"
#include "matool/operators.hpp"
#include "matool/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <array>
#include <random>

namespace matool {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kTruncationGrid = 64.0;

double partial_integral(const RadialMesh& mesh, const std::vector<double>& g, std::size_t k) {
  if (mesh.grading() == Grading::uniform && k % 2 == 0 && k >= 2) {
    const double h = mesh.cell(0);
    double acc = g[0] + g[k];
    for (std::size_t i = 1; i < k; ++i)
      acc += (i % 2 == 1 ? 4.0 : 2.0) * g[i];
    return acc * h / 3.0;
  }
  return mesh.integrate_to(g, k);
}

} // namespace

double cos2_bump(double r, double center, double halfwidth) {
  const double x = (r - center) / halfwidth;
  if (std::abs(x) >= 1.0)
    return 0.0;
  const double c = std::cos(0.5 * M_PI * x);
  return c * c;
}

Coefficient Coefficient::constant(double c) {
  if (!(c > 0.0))
    throw InvalidArgument("comparison coefficient must be positive");
  return {[c](double) { return c; }, fmt::format("const({})", c)};
}

Coefficient Coefficient::box_bump(double base, double height, double lo, double hi) {
  if (!(base > 0.0) || !(height >= 0.0) || !(hi > lo))
    throw InvalidArgument("box bump needs base > 0, height >= 0 and lo < hi");
  return {[=](double r) { return r >= lo && r <= hi ? base * (1.0 + height) : base; },
          fmt::format("{}*(1+{}*box[{},{}])", base, height, lo, hi)};
}

Coefficient Coefficient::smooth_bump(double base, double height, double center, double halfwidth) {
  if (!(base > 0.0) || !(height >= 0.0) || !(halfwidth > 0.0))
    throw InvalidArgument("smooth bump needs base > 0, height >= 0 and halfwidth > 0");
  return {[=](double r) { return base * (1.0 + height * cos2_bump(r, center, halfwidth)); },
          fmt::format("{}*(1+{}*cos2[{},{}])", base, height, center, halfwidth)};
}

Coefficient Coefficient::sampled(MeshPtr mesh, std::vector<double> values) {
  if (!mesh || values.size() != mesh->size())
    throw InvalidArgument("sampled coefficient length mismatch");
  for (double v : values)
    if (!(v > 0.0))
      throw InvalidArgument("sampled coefficient must be positive");
  auto fn = [mesh, values = std::move(values)](double r) {
    const auto& x = mesh->nodes();
    if (r <= x.front())
      return values.front();
    if (r >= x.back())
      return values.back();
    auto it = std::upper_bound(x.begin(), x.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - x.begin());
    const double t = (r - x[k - 1]) / (x[k] - x[k - 1]);
    return (1.0 - t) * values[k - 1] + t * values[k];
  };
  return {fn, "sampled"};
}

Coefficient Coefficient::from_function(std::function<double(double)> fn, std::string description) {
  return {std::move(fn), std::move(description)};
}

Coefficient Coefficient::modulated(std::function<double(double)> bump, std::string description) const {
  auto base = fn_;
  return {[base, bump = std::move(bump)](double r) { return base(r) * (1.0 + bump(r)); },
          fmt::format("{}*(1+{})", desc_, description)};
}

Coefficient Coefficient::scaled(double k) const {
  if (!(k > 0.0))
    throw InvalidArgument("coefficient scale must be positive");
  auto base = fn_;
  return {[base, k](double r) { return k * base(r); }, fmt::format("{}*{}", k, desc_)};
}

ComparisonProfile solve_comparison_profile(const Coefficient& b, MeshPtr mesh, int N, double amplitude) {
  if (N < 1)
    throw InvalidArgument("comparison problem needs N >= 1");
  if (!(amplitude > 0.0))
    throw InvalidArgument("comparison amplitude must be positive");
  const auto kernel = detail::coefficient_kernel(*mesh, [&b](double r) { return b(r); });
  const double q = N;
  const auto t = detail::march(*mesh, kernel, 1.0, q, amplitude,
                               [N](double u) { return phi_p(u, N + 1.0); }, false);
  if (!t.complete())
    throw ConvergenceError("comparison IVP overflow");
  ComparisonProfile out;
  out.profile = RadialProfile{mesh, t.v, std::vector<double>(t.v.size())};
  for (std::size_t i = 0; i < t.v.size(); ++i)
    out.profile.dvalues[i] = -detail::signed_root(t.w[i], q);
  out.flux = t.w;
  out.first_zero = t.first_zero;
  out.interior_zeros = interior_zero_count(t.v, 1e-12 * amplitude);
  out.terminal = detail::sentinel_terminal(t, mesh->radius());
  return out;
}

double tune_coefficient_scale(const Coefficient& shape, MeshPtr mesh, int N, double tol) {
  const double R = mesh->radius();
  auto T = [&](double sigma) {
    const auto kernel = detail::coefficient_kernel(*mesh, [&shape, sigma](double r) { return sigma * shape(r); });
    const auto t = detail::march(*mesh, kernel, 1.0, static_cast<double>(N), 1.0,
                                 [N](double u) { return phi_p(u, N + 1.0); }, true);
    return detail::sentinel_terminal(t, R);
  };
  double lo = 1.0, hi = 1.0;
  while (!(T(lo) > 0.0)) {
    lo *= 0.25;
    if (lo < 1e-14)
      throw BracketError("coefficient scale bracket failed (low side)", 0.0, 0.0);
  }
  while (!(T(hi) < 0.0)) {
    hi *= 4.0;
    if (hi > 1e14)
      throw BracketError("coefficient scale bracket failed (high side)", 0.0, 0.0);
  }
  if (lo == hi)
    lo = 0.25 * hi;
  for (int it = 0; it < 300 && hi - lo > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi))
      break;
    const double t = T(mid);
    if (t == 0.0)
      return mid;
    (t > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ComparisonInstance make_comparison_instance(const Coefficient& b1, const Coefficient& b2, MeshPtr mesh,
                                            int N, double u2_amplitude) {
  ComparisonInstance inst{mesh, N, b1, b2, b1.sample(*mesh), b2.sample(*mesh),
                          solve_comparison_profile(b1, mesh, N, 1.0),
                          solve_comparison_profile(b2, mesh, N, u2_amplitude)};
  return inst;
}

bool SturmResult::consistent() const {
  if (!hypothesis_violations.empty())
    return true;
  if (equal)
    return proportional && !zero_in_interior;
  if (strict)
    return zero_in_interior;
  return true;
}

SturmResult sturm_compare(const ComparisonInstance& inst) {
  SturmResult res;
  const auto& mesh = *inst.mesh;
  const std::size_t n = mesh.size();
  const auto& b1 = inst.b1_samples;
  const auto& b2 = inst.b2_samples;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, b1[i], b2[i]});
  const double eq_tol = 1e-14 * scale;
  std::size_t strict_nodes = 0;
  bool ordered = true, positive = true;
  res.equal = true;
  for (std::size_t i = 0; i < n; ++i) {
    positive = positive && b1[i] > 0.0;
    if (b2[i] < b1[i] - eq_tol)
      ordered = false;
    if (b2[i] > b1[i] + eq_tol)
      ++strict_nodes;
    if (std::abs(b2[i] - b1[i]) > eq_tol)
      res.equal = false;
  }
  res.strict = strict_nodes >= 2;
  if (!positive)
    res.hypothesis_violations.push_back("b1 is not positive");
  if (!ordered)
    res.hypothesis_violations.push_back("b2 >= b1 fails pointwise");
  const auto& u1 = inst.u1.profile.values;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(u1[i] > 0.0)) {
      res.hypothesis_violations.push_back(fmt::format("u1 not positive at r={}", mesh.node(i)));
      break;
    }
  const double R = mesh.radius();
  res.u2_first_zero = inst.u2.first_zero;
  res.zero_in_interior = inst.u2.first_zero && *inst.u2.first_zero < R * (1.0 - 1e-9);
  if (res.equal) {
    const auto& u2 = inst.u2.profile.values;
    const double mu = u2[0] / u1[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(u2[i] - mu * u1[i]));
    res.mu = mu;
    res.proportional = worst <= 1e-8 * sup_norm(u2);
  }
  return res;
}

double young_integrand(double u1, double du1, double u2, double du2, int N) {
  const double A = -du1;
  const double ratio = -du2 / u2;
  const double B = u1 * ratio;
  return std::pow(A, N + 1) + N * std::pow(B, N + 1) - (N + 1) * std::pow(u1, N) * A * std::pow(ratio, N);
}

PiconeResult picone_residual(const ComparisonInstance& inst, std::optional<double> eps) {
  const auto& mesh = *inst.mesh;
  const double R = mesh.radius();
  const double e = eps.value_or(0.05 * R);
  if (!(e > 0.0))
    throw InvalidArgument("truncation parameter must be positive");
  double T = R;
  if (inst.u1.first_zero)
    T = std::min(T, *inst.u1.first_zero);
  if (inst.u2.first_zero)
    T = std::min(T, *inst.u2.first_zero);
  T -= e;
  // snap to a grid shared by all dyadic refinements
  T = std::floor(T * kTruncationGrid / R) * R / kTruncationGrid;
  const auto& r = mesh.nodes();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(r.begin(), r.end(), T * (1.0 + 1e-12)) - r.begin());
  if (k == 0)
    throw InvalidArgument("truncation radius is not positive");
  --k;
  if (mesh.grading() == Grading::uniform && k % 2 == 1)
    --k;
  const auto& u1 = inst.u1.profile.values;
  const auto& u2 = inst.u2.profile.values;
  const auto& d1 = inst.u1.profile.dvalues;
  const auto& d2 = inst.u2.profile.dvalues;
  const auto& w1 = inst.u1.flux;
  const auto& w2 = inst.u2.flux;
  if (k < 2 || !(u2[k] > 1e-8 * sup_norm(u2)) || !(u1[k] > 0.0))
    throw InvalidArgument(fmt::format(
        "truncation parameter too small: solutions nearly vanish at r={} (u1={}, u2={})", r[k], u1[k], u2[k]));
  const int N = inst.N;
  std::vector<double> integrand(mesh.size(), 0.0), coeff(mesh.size(), 0.0);
  PiconeResult res;
  res.young_min = kInf;
  for (std::size_t i = 0; i <= k; ++i) {
    const double y = young_integrand(u1[i], d1[i], u2[i], d2[i], N);
    coeff[i] = (inst.b2_samples[i] - inst.b1_samples[i]) * std::pow(u1[i], N + 1);
    integrand[i] = coeff[i] + y;
    res.young_min = std::min(res.young_min, y);
  }
  auto Phi = [&](std::size_t i) {
    return std::pow(u1[i], N + 1) * w2[i] / std::pow(u2[i], N) - u1[i] * w1[i];
  };
  res.truncation = r[k];
  res.boundary_term = Phi(k) - Phi(0);
  res.rhs_integral = partial_integral(mesh, integrand, k);
  res.coefficient_integral = partial_integral(mesh, coeff, k);
  res.residual = std::abs(res.boundary_term - res.rhs_integral);
  return res;
}

PiconeRefinement picone_refinement(const Coefficient& b1, const Coefficient& b2, int N,
                                   std::span<const std::size_t> sizes) {
  if (sizes.size() < 2)
    throw InvalidArgument("refinement study needs at least two mesh sizes");
  PiconeRefinement out;
  out.young_min = kInf;
  out.min_order = kInf;
  for (std::size_t n : sizes) {
    const auto mesh = RadialMesh::build(n, 1.0, WeightFunction::constant());
    const auto pr = picone_residual(make_comparison_instance(b1, b2, mesh, N));
    out.sizes.push_back(n);
    out.residuals.push_back(pr.residual);
    out.young_min = std::min(out.young_min, pr.young_min);
  }
  for (std::size_t i = 1; i < out.residuals.size(); ++i) {
    const double o = std::log2(out.residuals[i - 1] / out.residuals[i]);
    out.orders.push_back(o);
    out.min_order = std::min(out.min_order, o);
  }
  return out;
}

bool SturmSuiteReport::passed(double mu_tol) const {
  const int n = static_cast<int>(trials.size());
  return n > 0 && zero_pass == n && proportional_pass == n && max_mu_error <= mu_tol && young_min >= -1e-10;
}

SturmSuiteReport run_sturm_suite(std::uint64_t master_seed, int trials, std::size_t mesh_n) {
  if (trials < 1)
    throw InvalidArgument("Sturm suite needs at least one trial");
  const auto mesh = RadialMesh::build(mesh_n, 1.0, WeightFunction::constant());
  auto results = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
    SturmTrial tr;
    tr.seed = splitmix64(master_seed + t);
    tr.N = 1 + static_cast<int>(t % 2);
    std::mt19937_64 rng(tr.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // b1: principal coefficient with a mild random profile
    const double c0 = 0.2 + 0.6 * U(rng), w0 = 0.1 + 0.3 * U(rng), h0 = 0.5 * U(rng);
    const auto shape = Coefficient::smooth_bump(1.0, h0, c0, w0);
    const double sigma = tune_coefficient_scale(shape, mesh, tr.N);
    const auto b1 = shape.scaled(sigma);
    // b2 = b1 (1 + U), U a sum of one to three non-negative smooth bumps
    const int bumps = 1 + static_cast<int>(3.0 * U(rng)) % 3;
    std::vector<std::array<double, 3>> params;
    for (int j = 0; j < bumps; ++j)
      params.push_back({0.05 + 0.9 * U(rng), 0.02 + 0.18 * U(rng), 0.05 + 1.95 * U(rng)});
    std::string desc;
    for (const auto& p : params)
      desc += fmt::format("{}{:.3f}*cos2[{:.3f},{:.3f}]", desc.empty() ? "" : "+", p[2], p[0], p[1]);
    const auto b2 = b1.modulated(
        [params](double r) {
          double acc = 0.0;
          for (const auto& p : params)
            acc += p[2] * cos2_bump(r, p[0], p[1]);
          return acc;
        },
        desc);
    tr.b2_description = b2.describe();
    const auto inst = make_comparison_instance(b1, b2, mesh, tr.N, 0.5 + 2.0 * U(rng));
    const auto res = sturm_compare(inst);
    tr.zero_in_interior = res.zero_in_interior && res.hypothesis_violations.empty();
    tr.young_min = picone_residual(inst).young_min;
    // equality instance: u2 = amplitude * u1
    const double amp = std::exp(std::log(0.1) + std::log(100.0) * U(rng));
    const auto eq = make_comparison_instance(b1, b1, mesh, tr.N, amp);
    const auto eres = sturm_compare(eq);
    tr.proportional = eres.proportional && !eres.zero_in_interior && eres.hypothesis_violations.empty();
    tr.mu_error = eres.mu ? std::abs(*eres.mu - amp) / amp : kInf;
    tr.young_min = std::min(tr.young_min, picone_residual(eq).young_min);
    return tr;
  });
  SturmSuiteReport rep;
  rep.young_min = kInf;
  for (auto& tr : results) {
    rep.zero_pass += tr.zero_in_interior;
    rep.proportional_pass += tr.proportional;
    rep.max_mu_error = std::max(rep.max_mu_error, tr.mu_error);
    rep.young_min = std::min(rep.young_min, tr.young_min);
  }
  rep.trials = std::move(results);
  return rep;
}

} // namespace matool
