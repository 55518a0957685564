#include "matool/branch.hpp"

#include "matool/error.hpp"
#include "matool/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <numeric>
#include <variant>

namespace matool {

namespace {

struct SweepSample {
  bool ok = false;
  double lambda = 0.0;
  ShotResult shot;
  std::string reason;
};

SweepSample solve_point(double s, const BvpShooter& shooter, const SweepOptions& opt) {
  SweepSample out;
  try {
    auto sol = solve_lambda_for_amplitude(s, shooter, std::nullopt, opt.tol, opt.search);
    out.ok = true;
    out.lambda = sol.lambda;
    out.shot = std::move(sol.shot);
  } catch (const Error& e) {
    out.reason = e.what();
  }
  return out;
}

bool is_extremum(const std::vector<BranchPoint>& pts, std::size_t i, bool maximum) {
  const double li = pts[i].lambda;
  const double sgn = maximum ? 1.0 : -1.0;
  if (!(sgn * (li - pts[i - 1].lambda) > 0.0) || !(sgn * (li - pts[i + 1].lambda) >= 0.0))
    return false;
  // prominence over a few neighbours on each side
  const std::size_t lo = i >= 3 ? i - 3 : 0;
  const std::size_t hi = std::min(pts.size() - 1, i + 3);
  double left = li, right = li;
  for (std::size_t k = lo; k < i; ++k)
    left = maximum ? std::min(left, pts[k].lambda) : std::max(left, pts[k].lambda);
  for (std::size_t k = i + 1; k <= hi; ++k)
    right = maximum ? std::min(right, pts[k].lambda) : std::max(right, pts[k].lambda);
  const double prom = std::min(std::abs(li - left), std::abs(li - right));
  return prom > 1e-9 * std::abs(li);
}

} // namespace

std::string to_string(CaseId c) {
  static const char* names[] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)", "(viii)", "(ix)"};
  return names[static_cast<int>(c)];
}

CaseId case_of(const Nonlinearity& f) {
  auto cls = [](double x) { return x == 0.0 ? 0 : (std::isinf(x) ? 2 : 1); };
  const int a = cls(f.f0()), b = cls(f.finf());
  static const CaseId table[3][3] = {
      {CaseId::v, CaseId::iv, CaseId::vi},
      {CaseId::ii, CaseId::i, CaseId::iii},
      {CaseId::vii, CaseId::viii, CaseId::ix},
  };
  return table[a][b];
}

std::string describe(const AsymptoteEstimate& a) {
  switch (a.kind) {
  case AsymptoteEstimate::Kind::to_zero:
    return "-> 0";
  case AsymptoteEstimate::Kind::to_infinity:
    return "-> +inf";
  case AsymptoteEstimate::Kind::finite:
    return fmt::format("{:.8g} +/- {:.2e}", a.value, a.error);
  }
  return {};
}

double Branch::min_lambda() const {
  double m = kInf;
  for (const auto& p : points)
    m = std::min(m, p.lambda);
  return m;
}

double Branch::max_lambda() const {
  double m = 0.0;
  for (const auto& p : points)
    m = std::max(m, p.lambda);
  return m;
}

std::vector<double> default_amplitude_grid(int per_decade, double lo, double hi) {
  return log_grid(lo, hi, per_decade);
}

Branch sweep(const Nonlinearity& spec, MeshPtr mesh, std::span<const double> s_grid,
             const SweepOptions& opt) {
  for (std::size_t i = 0; i < s_grid.size(); ++i)
    if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1])))
      throw InvalidArgument("amplitude grid must be positive and strictly increasing");
  const BvpShooter shooter(spec, mesh);
  auto samples = parallel_map(s_grid.size(), [&](std::size_t i) { return solve_point(s_grid[i], shooter, opt); });

  Branch b{spec, mesh, opt.search, {}, {}, {}, {}, {}, {}, case_of(spec), false};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& sm = samples[i];
    if (!sm.ok) {
      b.failures.push_back({s_grid[i], sm.reason});
      continue;
    }
    BranchPoint p;
    p.s = s_grid[i];
    p.lambda = sm.lambda;
    p.sup_norm = sup_norm(sm.shot.profile);
    p.profile_id = b.profiles.size();
    b.profiles.push_back(std::move(sm.shot));
    b.points.push_back(p);
  }
  if (b.points.size() < opt.min_points)
    throw NoSolution(fmt::format("branch has only {} successful points (need {})", b.points.size(),
                                 opt.min_points));

  const double spread = (b.max_lambda() - b.min_lambda()) / b.max_lambda();
  b.vertical = spec.is_homogeneous() || spread < 1e-7;

  if (!b.vertical) {
    std::vector<std::pair<std::size_t, bool>> found;
    for (std::size_t i = 1; i + 1 < b.points.size(); ++i) {
      if (is_extremum(b.points, i, true))
        found.push_back({i, true});
      else if (is_extremum(b.points, i, false))
        found.push_back({i, false});
    }
    std::vector<BranchPoint> extra;
    for (auto [i, maximum] : found) {
      double lo = std::log(b.points[i - 1].s), hi = std::log(b.points[i + 1].s);
      TurningPoint tp{b.points[i].s, b.points[i].lambda, maximum};
      if (opt.refine_turning_points) {
        const double sgn = maximum ? -1.0 : 1.0;
        auto g = [&](double x) {
          auto sm = solve_point(std::exp(x), shooter, opt);
          return sm.ok ? sgn * sm.lambda : kInf;
        };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double g1 = g(x1), g2 = g(x2);
        while (hi - lo > opt.turning_tol) {
          if (g1 < g2) {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - gr * (hi - lo);
            g1 = g(x1);
          } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + gr * (hi - lo);
            g2 = g(x2);
          }
        }
        const double s_star = std::exp(0.5 * (lo + hi));
        auto sm = solve_point(s_star, shooter, opt);
        if (sm.ok && sgn * sm.lambda <= sgn * tp.lambda) {
          tp = {s_star, sm.lambda, maximum};
          BranchPoint p;
          p.s = s_star;
          p.lambda = sm.lambda;
          p.sup_norm = sup_norm(sm.shot.profile);
          p.profile_id = b.profiles.size();
          p.refined = true;
          b.profiles.push_back(std::move(sm.shot));
          extra.push_back(p);
        }
      }
      b.turning_points.push_back(tp);
    }
    for (auto& p : extra) {
      auto it = std::lower_bound(b.points.begin(), b.points.end(), p.s,
                                 [](const BranchPoint& a, double s) { return a.s < s; });
      if (it != b.points.end() && it->s == p.s)
        continue;
      b.points.insert(it, p);
    }
  }
  try {
    b.asymptote_zero = estimate_tail(b, true);
  } catch (const Error&) {
  }
  try {
    b.asymptote_inf = estimate_tail(b, false);
  } catch (const Error&) {
  }
  return b;
}

AsymptoteEstimate estimate_tail(const Branch& branch, bool small_end) {
  std::vector<const BranchPoint*> pts;
  for (const auto& p : branch.points)
    if (!p.refined)
      pts.push_back(&p);
  if (!small_end)
    std::reverse(pts.begin(), pts.end());
  // tail subsample spaced about half a decade apart
  std::vector<const BranchPoint*> tail;
  for (const auto* p : pts) {
    if (tail.empty() || std::abs(std::log10(p->s / tail.back()->s)) >= 0.5 - 1e-9)
      tail.push_back(p);
    if (tail.size() == 5)
      break;
  }
  if (tail.size() < 5)
    throw InvalidArgument(fmt::format("insufficient tail points for asymptote estimate ({})", tail.size()));
  AsymptoteEstimate est;
  est.tail_points = static_cast<int>(tail.size());
  est.slope = std::log(tail[0]->lambda / tail[1]->lambda) / std::log(tail[0]->s / tail[1]->s);
  const double outward = small_end ? -est.slope : est.slope; // growth of lambda toward the end
  if (outward > 0.05) {
    est.kind = AsymptoteEstimate::Kind::to_infinity;
    est.value = kInf;
    return est;
  }
  if (outward < -0.05) {
    est.kind = AsymptoteEstimate::Kind::to_zero;
    est.value = 0.0;
    return est;
  }
  const double x0 = tail[2]->lambda, x1 = tail[1]->lambda, x2 = tail[0]->lambda;
  const double d1 = x1 - x0, d2 = x2 - x1;
  const double den = d2 - d1;
  double lim = x2;
  if (den != 0.0 && std::abs(d2) < std::abs(d1))
    lim = x2 - d2 * d2 / den;
  est.kind = AsymptoteEstimate::Kind::finite;
  est.value = lim;
  est.error = std::abs(lim - x2);
  return est;
}

double linear_threshold(double lambda1, double limit, int N) {
  if (limit == 0.0)
    return kInf;
  if (std::isinf(limit))
    return 0.0;
  return lambda1 / std::pow(limit, 1.0 / N);
}

AsymptoteReport estimate_asymptotes(const Branch& branch, const Nonlinearity& spec, double lambda1,
                                    double rel_tol) {
  AsymptoteReport rep;
  rep.zero = estimate_tail(branch, true);
  rep.inf = estimate_tail(branch, false);
  rep.target_zero = linear_threshold(lambda1, spec.f0(), spec.dimension());
  rep.target_inf = linear_threshold(lambda1, spec.finf(), spec.dimension());
  auto matches = [&](const AsymptoteEstimate& e, double target) {
    switch (e.kind) {
    case AsymptoteEstimate::Kind::to_infinity:
      return std::isinf(target);
    case AsymptoteEstimate::Kind::to_zero:
      return target == 0.0;
    case AsymptoteEstimate::Kind::finite:
      return std::isfinite(target) && target > 0.0 &&
             std::abs(e.value - target) <= rel_tol * target + e.error;
    }
    return false;
  };
  rep.zero_matches = matches(rep.zero, rep.target_zero);
  rep.inf_matches = matches(rep.inf, rep.target_inf);
  return rep;
}

SolutionCount count_solutions(const Branch& branch, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda) || lambda < branch.search.floor ||
      lambda > branch.search.cap)
    throw InvalidArgument(fmt::format("lambda={} outside swept range [{}, {}]", lambda,
                                      branch.search.floor, branch.search.cap));
  SolutionCount out;
  const auto& pts = branch.points;
  if (pts.empty())
    throw InvalidArgument("cannot count solutions on an empty branch");
  if (branch.vertical) {
    const double mean = std::accumulate(pts.begin(), pts.end(), 0.0,
                                        [](double a, const BranchPoint& p) { return a + p.lambda; }) /
                        static_cast<double>(pts.size());
    if (std::abs(lambda - mean) <= 1e-6 * mean) {
      out.continuum = true;
      return out;
    }
  }
  const BvpShooter shooter(branch.spec, branch.mesh);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const bool above_i = pts[i].lambda >= lambda;
    const bool above_j = pts[i + 1].lambda >= lambda;
    if (above_i == above_j)
      continue;
    double lo = pts[i].s, hi = pts[i + 1].s;
    double t_lo = shooter.terminal(lambda, lo), t_hi = shooter.terminal(lambda, hi);
    double root;
    if (std::isfinite(t_lo) && std::isfinite(t_hi) && (t_lo > 0.0) != (t_hi > 0.0)) {
      for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi))
          break;
        const double t = shooter.terminal(lambda, mid);
        ((std::isfinite(t) && (t > 0.0) == (t_lo > 0.0)) ? lo : hi) = mid;
      }
      root = std::sqrt(lo * hi);
    } else {
      const double w = (lambda - pts[i].lambda) / (pts[i + 1].lambda - pts[i].lambda);
      root = std::exp((1.0 - w) * std::log(lo) + w * std::log(hi));
    }
    out.amplitudes.push_back(root);
  }
  out.count = static_cast<int>(out.amplitudes.size());
  return out;
}

std::string Threshold::describe() const {
  switch (kind) {
  case Kind::value:
    return std::isinf(value) ? "+inf" : fmt::format("{:.8g}", value);
  case Kind::turning_max:
    return "lambda* (turning maximum)";
  case Kind::turning_min:
    return "lambda_* (turning minimum)";
  case Kind::branch_min:
    return "min lambda(s) on branch";
  case Kind::branch_max:
    return "max lambda(s) on branch";
  }
  return {};
}

CasePrediction classify_case(const Nonlinearity& spec, double lambda1) {
  if (!(lambda1 > 0.0))
    throw InvalidArgument("classify_case needs lambda1 > 0");
  const double f0 = spec.f0(), fi = spec.finf();
  if (!(f0 >= 0.0) || !(fi >= 0.0))
    throw InvalidArgument("classify_case needs declared limits f0, finf");
  const int N = spec.dimension();
  const double t0 = linear_threshold(lambda1, f0, N);
  const double ti = linear_threshold(lambda1, fi, N);
  CasePrediction pr;
  pr.case_id = case_of(spec);
  const std::string cs = "case " + to_string(pr.case_id);
  auto val = Threshold::of;
  auto exist = [&](Threshold lo, Threshold hi, int k, std::string what) {
    pr.intervals.push_back({lo, hi, k, false, cs + ": " + what});
  };
  auto none = [&](Threshold lo, Threshold hi, std::string what) {
    pr.intervals.push_back({lo, hi, 0, true, cs + ": " + what});
  };
  switch (pr.case_id) {
  case CaseId::i:
    pr.regime = "finite positive limits at zero and infinity";
    if (t0 != ti)
      exist(val(std::min(t0, ti)), val(std::max(t0, ti)), 1, "existence between lambda1/f0 and lambda1/finf");
    break;
  case CaseId::ii:
    pr.regime = "finite positive f0, vanishing finf";
    exist(val(t0), val(kInf), 1, "existence above lambda1/f0");
    break;
  case CaseId::iii:
    pr.regime = "finite positive f0, infinite finf";
    exist(val(0.0), val(t0), 1, "existence below lambda1/f0");
    break;
  case CaseId::iv:
    pr.regime = "vanishing f0, finite positive finf";
    exist(val(ti), val(kInf), 1, "existence above lambda1/finf");
    break;
  case CaseId::v:
    pr.regime = "vanishing f0 and finf";
    exist({Threshold::Kind::turning_min, 0.0}, val(kInf), 2, "two solutions above lambda_*");
    none(val(0.0), {Threshold::Kind::branch_min, 0.0}, "no solution below the branch minimum");
    break;
  case CaseId::vi:
    pr.regime = "vanishing f0, infinite finf";
    exist(val(0.0), val(kInf), 1, "existence for every lambda");
    break;
  case CaseId::vii:
    pr.regime = "infinite f0, vanishing finf";
    exist(val(0.0), val(kInf), 1, "existence for every lambda");
    break;
  case CaseId::viii:
    pr.regime = "infinite f0, finite positive finf";
    exist(val(0.0), val(ti), 1, "existence below lambda1/finf");
    break;
  case CaseId::ix:
    pr.regime = "infinite f0 and finf";
    exist(val(0.0), {Threshold::Kind::turning_max, 0.0}, 2, "two solutions below lambda*");
    none({Threshold::Kind::branch_max, 0.0}, val(kInf), "no solution above the branch maximum");
    break;
  }
  // comparison bounds from the extremes of f(s)/s^N
  const auto rb = spec.ratio_bounds(1e-8, 1e8, 64);
  if (std::isfinite(f0) && std::isfinite(fi)) {
    const double sup = std::max({rb.sup, f0, fi});
    none(val(0.0), val(linear_threshold(lambda1, sup, N)), "no solution below lambda1/sup(f/s^N)");
  }
  if (f0 > 0.0 && fi > 0.0) {
    const double inf = std::min({rb.inf, f0, fi});
    none(val(linear_threshold(lambda1, inf, N)), val(kInf), "no solution above lambda1/inf(f/s^N)");
  }
  return pr;
}

bool CaseReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CaseCheck& c) { return c.passed; });
}

CaseReport verify_case(const Branch& branch, const CasePrediction& prediction,
                       std::span<const double> probes, double margin) {
  CaseReport rep;
  rep.case_id = prediction.case_id;
  auto resolve = [&](const Threshold& t) -> std::optional<double> {
    switch (t.kind) {
    case Threshold::Kind::value:
      return t.value;
    case Threshold::Kind::branch_min:
      return branch.min_lambda();
    case Threshold::Kind::branch_max:
      return branch.max_lambda();
    case Threshold::Kind::turning_max:
    case Threshold::Kind::turning_min: {
      const bool want_max = t.kind == Threshold::Kind::turning_max;
      std::optional<double> best;
      for (const auto& tp : branch.turning_points)
        if (tp.maximum == want_max)
          best = best ? (want_max ? std::max(*best, tp.lambda) : std::min(*best, tp.lambda)) : tp.lambda;
      return best;
    }
    }
    return std::nullopt;
  };
  for (double lam : probes) {
    SolutionCount cnt;
    try {
      cnt = count_solutions(branch, lam);
    } catch (const Error& e) {
      rep.checks.push_back({lam, "probe", true, false, 0, false, e.what()});
      continue;
    }
    if (cnt.continuum) {
      rep.checks.push_back({lam, "homogeneous continuum", true, true, 0, true,
                            "every amplitude solves at lambda1"});
      continue;
    }
    bool any = false;
    for (const auto& iv : prediction.intervals) {
      const auto lo = resolve(iv.lo), hi = resolve(iv.hi);
      CaseCheck c{lam, iv.label, false, true, cnt.count, false, {}};
      if (!lo || !hi) {
        c.message = fmt::format("threshold unresolved on branch ({} .. {})", iv.lo.describe(), iv.hi.describe());
        if (iv.lo.kind != Threshold::Kind::value || iv.hi.kind != Threshold::Kind::value) {
          // a predicted turning point that was never detected is itself a failure
          c.judged = true;
          c.passed = false;
          rep.checks.push_back(c);
          any = true;
        }
        continue;
      }
      const double a = *lo > 0.0 && std::isfinite(*lo) ? *lo * (1.0 + margin) : *lo;
      const double b = std::isfinite(*hi) ? *hi * (1.0 - margin) : *hi;
      if (!(lam > a && lam < b))
        continue;
      any = true;
      c.judged = true;
      if (iv.nonexistence) {
        c.passed = cnt.count == 0;
        c.message = fmt::format("expected no solution in ({:.6g}, {:.6g}), found {}", *lo, *hi, cnt.count);
      } else {
        c.passed = cnt.count >= iv.min_count;
        c.message = fmt::format("expected at least {} in ({:.6g}, {:.6g}), found {}", iv.min_count, *lo, *hi,
                                cnt.count);
      }
      rep.checks.push_back(c);
    }
    if (!any)
      rep.checks.push_back({lam, "no prediction", false, true, cnt.count, false,
                            "probe inside a margin band or outside every predicted interval"});
  }
  return rep;
}

double scale_to_ball(double lambda, double R, const WeightFunction& a) {
  if (!(R > 0.0))
    throw InvalidArgument("scale_to_ball needs R > 0");
  if (!a.is_constant())
    throw InvalidArgument("scaling law needs a constant weight");
  return lambda * R * R;
}

} // namespace matool
