#include "matool/cli/run.hpp"

#include "matool/branch.hpp"
#include "matool/bvp.hpp"
#include "matool/cli/emit.hpp"
#include "matool/compare.hpp"
#include "matool/eigen.hpp"
#include "matool/error.hpp"
#include "matool/setlim.hpp"
#include "matool/stability.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/core.h>
#include <fmt/format.h>
#include <iostream>
#include <map>

namespace matool::cli {

using nlohmann::json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output.out_dir) / name).string();
}

void emit(Outcome& o, const RunConfig& cfg, const std::string& name, const std::string& content) {
  const auto path = out_path(cfg, name);
  write_file(path, content);
  o.artifacts.push_back(path);
}

SweepOptions sweep_options(const RunConfig& cfg) {
  SweepOptions opt;
  opt.search.floor = cfg.numerics.lambda_floor;
  opt.search.cap = cfg.numerics.lambda_cap;
  opt.tol = cfg.numerics.tol_bisect;
  return opt;
}

std::vector<double> amplitude_grid(const RunConfig& cfg) {
  return log_grid(cfg.numerics.s_min, cfg.numerics.s_max, cfg.numerics.s_per_decade);
}

json asymptote_json(const AsymptoteEstimate& a) {
  static const std::map<AsymptoteEstimate::Kind, const char*> names{
      {AsymptoteEstimate::Kind::finite, "finite"},
      {AsymptoteEstimate::Kind::to_zero, "to_zero"},
      {AsymptoteEstimate::Kind::to_infinity, "to_infinity"}};
  return {{"kind", names.at(a.kind)}, {"value", jnum(a.value)}, {"error", jnum(a.error)},
          {"slope", jnum(a.slope)},   {"tail_points", a.tail_points}, {"text", describe(a)}};
}

json branch_json(const Branch& b) {
  json pts = json::array();
  for (const auto& p : b.points) {
    json q = {{"s", jnum(p.s)}, {"lambda", jnum(p.lambda)}, {"sup_norm", jnum(p.sup_norm)}, {"refined", p.refined}};
    if (p.principal_eig)
      q["principal_eig"] = jnum(*p.principal_eig);
    if (p.morse_index)
      q["morse_index"] = *p.morse_index;
    pts.push_back(q);
  }
  json tps = json::array();
  for (const auto& t : b.turning_points)
    tps.push_back({{"s", jnum(t.s)}, {"lambda", jnum(t.lambda)}, {"kind", t.maximum ? "max" : "min"}});
  json fails = json::array();
  for (const auto& f : b.failures)
    fails.push_back({{"s", jnum(f.s)}, {"reason", f.reason}});
  return {{"case", to_string(b.case_id)},
          {"vertical", b.vertical},
          {"points", pts},
          {"turning_points", tps},
          {"failures", fails},
          {"asymptote_zero", asymptote_json(b.asymptote_zero)},
          {"asymptote_inf", asymptote_json(b.asymptote_inf)},
          {"min_lambda", jnum(b.min_lambda())},
          {"max_lambda", jnum(b.max_lambda())}};
}

struct HygieneTally {
  int checked = 0;
  int failed = 0;
  json failures = json::array();

  void add(const ShotResult& shot) {
    ++checked;
    const auto h = check_hygiene(shot);
    if (!h.ok()) {
      ++failed;
      failures.push_back({{"s", jnum(shot.amplitude)},
                          {"lambda", jnum(shot.lambda)},
                          {"double_zero", h.double_zero},
                          {"positive_interior", h.positive_interior},
                          {"chord_bound", h.chord_bound},
                          {"concave", h.concave},
                          {"flux_monotone", h.flux_monotone}});
    }
  }
  json to_json() const { return {{"checked", checked}, {"failed", failed}, {"failures", failures}}; }
};

Branch compute_branch(const RunConfig& cfg, const MeshPtr& mesh) {
  const auto grid = amplitude_grid(cfg);
  auto b = sweep(cfg.nonlinearity(), mesh, grid, sweep_options(cfg));
  if (b.points.empty())
    throw InvalidArgument("branch sweep produced no accepted points; refusing to emit an empty branch");
  return b;
}

Outcome cmd_eigen(const RunConfig& cfg) {
  Outcome o;
  const auto mesh = cfg.mesh();
  const double p = cfg.p();
  const auto sh = eig_shoot(p, mesh, cfg.numerics.tol_bisect);
  const auto ry = eig_rayleigh(p, mesh);
  const double gap = std::abs(sh.mu1 - ry.mu1) / sh.mu1;
  o.report["p"] = p;
  o.report["shooting"] = {{"mu1", jnum(sh.mu1)}, {"iterations", sh.iterations}, {"residual", jnum(sh.residual)}};
  o.report["rayleigh"] = {{"mu1", jnum(ry.mu1)}, {"iterations", ry.iterations}, {"converged", ry.converged},
                          {"residual", jnum(ry.residual)}};
  o.report["relative_gap"] = jnum(gap);
  o.lines.push_back(fmt::format("mu1(p={}) shooting = {:.10f}", p, sh.mu1));
  o.lines.push_back(fmt::format("mu1(p={}) rayleigh = {:.10f}", p, ry.mu1));
  o.lines.push_back(fmt::format("relative gap = {:.3e}", gap));
  if (p == cfg.problem.N + 1.0) {
    o.report["lambda1"] = jnum(sh.mu1);
    if (cfg.weight().is_constant()) {
      const double unit = scale_to_ball(sh.mu1, cfg.problem.R, cfg.weight());
      o.report["lambda1_unit_ball"] = jnum(unit);
      o.lines.push_back(fmt::format("lambda1 scaled to the unit ball = {:.10f}", unit));
    }
  }
  if (p == 2.0 && cfg.weight().is_constant()) {
    const double c = cfg.weight()(0.0);
    const double exact = M_PI * M_PI / (4.0 * cfg.problem.R * cfg.problem.R * c);
    o.report["closed_form"] = exact;
    o.lines.push_back(fmt::format("closed form = {:.10f}", exact));
  }
  const bool ok = gap < 1e-4 && ry.converged;
  o.report["passed"] = ok;
  o.exit_code = ok ? kOk : kVerification;
  return o;
}

Outcome cmd_mu_scan(const RunConfig& cfg) {
  Outcome o;
  auto grid = cfg.numerics.p_grid;
  if (grid.empty())
    for (int i = 0; i <= 20; ++i)
      grid.push_back(2.0 + i / 10.0);
  const auto scan = mu1_scan(grid, cfg.mesh());
  const auto chk = check_mu_scan(scan);
  json rows = json::array();
  for (const auto& r : scan.rows) {
    rows.push_back({{"p", r.p}, {"mu1", jnum(r.mu1)}});
    o.lines.push_back(fmt::format("p = {:<6.4g} mu1 = {:.10f}", r.p, r.mu1));
  }
  o.report["rows"] = rows;
  o.report["max_jump"] = jnum(scan.max_jump);
  o.report["worst_relative_step"] = jnum(chk.worst_step);
  o.report["spikes"] = chk.spikes;
  const bool ok = chk.small_steps && chk.no_spikes;
  o.report["passed"] = ok;
  o.lines.push_back(fmt::format("worst relative step {:.4f}, spikes {}", chk.worst_step, chk.spikes.size()));
  if (cfg.output.format == "csv")
    emit(o, cfg, "mu_scan.csv", mu_scan_csv(scan));
  o.exit_code = ok ? kOk : kVerification;
  return o;
}

Outcome cmd_solve(const RunConfig& cfg) {
  Outcome o;
  const auto mesh = cfg.mesh();
  const BvpShooter shooter(cfg.nonlinearity(), mesh);
  LambdaSearch search;
  search.floor = cfg.numerics.lambda_floor;
  search.cap = cfg.numerics.lambda_cap;
  HygieneTally hyg;
  json rows = json::array();
  std::string csv = "s,lambda,sup_norm,hygiene_ok\n";
  auto add = [&](const ShotResult& shot) {
    hyg.add(shot);
    const bool ok = check_hygiene(shot).ok();
    rows.push_back({{"s", jnum(shot.amplitude)}, {"lambda", jnum(shot.lambda)},
                    {"sup_norm", jnum(sup_norm(shot.profile))}, {"hygiene_ok", ok}});
    csv += fmt::format("{},{},{},{}\n", num(shot.amplitude), num(shot.lambda), num(sup_norm(shot.profile)), ok ? 1 : 0);
    o.lines.push_back(fmt::format("s = {:.8g}  lambda = {:.10g}", shot.amplitude, shot.lambda));
  };
  if (!cfg.numerics.amplitudes.empty()) {
    for (double s : cfg.numerics.amplitudes) {
      try {
        add(solve_lambda_for_amplitude(s, shooter, {}, cfg.numerics.tol_bisect, search).shot);
      } catch (const NoSolution& e) {
        rows.push_back({{"s", jnum(s)}, {"error", e.what()}});
        o.lines.push_back(fmt::format("s = {:.8g}  no solution: {}", s, e.what()));
      }
    }
  } else if (cfg.numerics.lambda) {
    const auto grid = amplitude_grid(cfg);
    const auto roots = solve_amplitudes_for_lambda(*cfg.numerics.lambda, shooter, grid);
    o.report["lambda"] = jnum(*cfg.numerics.lambda);
    o.report["count"] = roots.size();
    o.lines.push_back(fmt::format("{} solution(s) at lambda = {}", roots.size(), *cfg.numerics.lambda));
    for (const auto& r : roots)
      add(r.shot);
  } else {
    throw InvalidArgument("solve needs numerics.lambda or numerics.amplitudes");
  }
  o.report["solutions"] = rows;
  o.report["hygiene"] = hyg.to_json();
  if (cfg.output.format == "csv")
    emit(o, cfg, "solve.csv", csv);
  o.exit_code = hyg.failed == 0 ? kOk : kVerification;
  o.report["passed"] = hyg.failed == 0;
  return o;
}

Outcome cmd_branch(const RunConfig& cfg) {
  Outcome o;
  const auto mesh = cfg.mesh();
  auto br = compute_branch(cfg, mesh);
  annotate_stability(br);
  const double l1 = eig_shoot(cfg.problem.N + 1.0, mesh, cfg.numerics.tol_bisect).mu1;
  HygieneTally hyg;
  for (const auto& p : br.points)
    hyg.add(br.profile(p));
  o.report["lambda1"] = jnum(l1);
  o.report["branch"] = branch_json(br);
  o.report["hygiene"] = hyg.to_json();
  o.lines.push_back(fmt::format("case {} with {} points ({} failures), lambda in [{:.8g}, {:.8g}]",
                                to_string(br.case_id), br.points.size(), br.failures.size(), br.min_lambda(),
                                br.max_lambda()));
  for (const auto& t : br.turning_points)
    o.lines.push_back(fmt::format("turning point ({}) at s = {:.8g}, lambda = {:.10f}", t.maximum ? "max" : "min",
                                  t.s, t.lambda));
  o.lines.push_back(fmt::format("s -> 0: {}", describe(br.asymptote_zero)));
  o.lines.push_back(fmt::format("s -> inf: {}", describe(br.asymptote_inf)));
  if (cfg.output.format == "csv")
    emit(o, cfg, "branch.csv", branch_csv(br));
  if (cfg.output.svg)
    emit(o, cfg, "branch.svg", branch_svg(br, l1));
  o.exit_code = hyg.failed == 0 ? kOk : kVerification;
  o.report["passed"] = hyg.failed == 0;
  return o;
}

std::vector<double> auto_probes(const Branch& br, double l1) {
  std::vector<double> out;
  for (double r : {0.1, 0.5, 0.9, 1.2, 2.0, 5.0, 10.0})
    out.push_back(r * l1);
  for (const auto& t : br.turning_points)
    for (double r : {0.5, 0.9, 1.1, 2.0})
      out.push_back(r * t.lambda);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  const double floor = br.search.floor, cap = br.search.cap;
  std::erase_if(out, [&](double x) { return x < floor || x > cap; });
  return out;
}

Outcome cmd_cases(const RunConfig& cfg) {
  Outcome o;
  const auto mesh = cfg.mesh();
  const auto br = compute_branch(cfg, mesh);
  const double l1 = lambda1(cfg.problem.N, mesh);
  const auto pred = classify_case(cfg.nonlinearity(), l1);
  const auto probes = cfg.numerics.probes.empty() ? auto_probes(br, l1) : cfg.numerics.probes;
  const auto rep = verify_case(br, pred, probes);
  HygieneTally hyg;
  for (const auto& p : br.points)
    hyg.add(br.profile(p));
  json intervals = json::array();
  for (const auto& iv : pred.intervals)
    intervals.push_back({{"lo", iv.lo.describe()}, {"hi", iv.hi.describe()}, {"min_count", iv.min_count},
                         {"nonexistence", iv.nonexistence}, {"label", iv.label}});
  json checks = json::array();
  o.lines.push_back(fmt::format("case {}: {}", to_string(pred.case_id), pred.regime));
  for (const auto& t : br.turning_points)
    o.lines.push_back(fmt::format("turning point ({}) lambda = {:.10f}", t.maximum ? "max" : "min", t.lambda));
  for (const auto& c : rep.checks) {
    checks.push_back({{"lambda", jnum(c.lambda)}, {"label", c.label}, {"judged", c.judged}, {"passed", c.passed},
                      {"observed", c.observed}, {"continuum", c.continuum}, {"message", c.message}});
    if (c.judged)
      o.lines.push_back(fmt::format("{} [{}] at lambda = {:.6g}: {}", c.passed ? "pass" : "FAIL", c.label,
                                    c.lambda, c.message));
  }
  const bool ok = rep.passed() && hyg.failed == 0;
  o.report["lambda1"] = jnum(l1);
  o.report["case"] = to_string(pred.case_id);
  o.report["source"] = pred.regime;
  o.report["intervals"] = intervals;
  o.report["checks"] = checks;
  o.report["branch"] = branch_json(br);
  o.report["hygiene"] = hyg.to_json();
  o.report["passed"] = ok;
  o.exit_code = ok ? kOk : kVerification;
  return o;
}

Outcome cmd_stability(const RunConfig& cfg) {
  Outcome o;
  const auto mesh = cfg.mesh();
  auto br = compute_branch(cfg, mesh);
  const auto identities = annotate_stability(br, true);
  const auto f = cfg.nonlinearity();
  const auto cond = stability_condition_check(f, cfg.numerics.s_max, cfg.numerics.s_min);
  const auto mono = branch_monotonicity(br);
  double worst_identity = 0.0;
  int unstable = 0, nonzero_morse = 0;
  json pts = json::array();
  int unresolved = 0;
  for (std::size_t i = 0; i < br.points.size(); ++i) {
    const auto& p = br.points[i];
    const auto& id = identities[i];
    if (id)
      worst_identity = std::max(worst_identity, id->relative);
    else
      ++unresolved;
    unstable += p.principal_eig && *p.principal_eig <= 0.0;
    nonzero_morse += p.morse_index && *p.morse_index != 0;
    pts.push_back({{"s", jnum(p.s)},
                   {"lambda", jnum(p.lambda)},
                   {"principal_eig", p.principal_eig ? jnum(*p.principal_eig) : json(nullptr)},
                   {"morse_index", p.morse_index ? json(*p.morse_index) : json(nullptr)},
                   {"identity_relative", id ? jnum(id->relative) : json(nullptr)}});
  }
  json viol = json::array();
  for (const auto& v : mono.violations)
    viol.push_back({{"index", v.index}, {"kind", v.kind}, {"detail", jnum(v.detail)}});
  bool ok = worst_identity < 1e-4;
  if (cond.holds)
    ok = ok && mono.monotone && unstable == 0 && nonzero_morse == 0;
  const double f0 = f.f0();
  if (f0 > 0.0 && std::isfinite(f0)) {
    const auto psi1 = eig_shoot(cfg.problem.N + 1.0, mesh, cfg.numerics.tol_bisect).eigenfunction;
    const auto dir = bifurcation_direction(br, psi1);
    const bool dir_ok = f.is_homogeneous() ? dir.distances.back() < 1e-8 : dir.decreasing;
    ok = ok && dir_ok;
    json d = json::array();
    for (std::size_t k = 0; k < dir.distances.size(); ++k)
      d.push_back({{"s", jnum(dir.amplitudes[k])}, {"distance", jnum(dir.distances[k])}});
    o.report["bifurcation_direction"] = {{"points", d}, {"passed", dir_ok}};
    o.lines.push_back(fmt::format("sup |v/s - psi1| at the {} smallest amplitudes: {}", dir.distances.size(),
                                  fmt::format("{:.3e}", fmt::join(dir.distances, ", "))));
  }
  o.report["stability_condition"] = {{"holds", cond.holds},
                                     {"first_violation", cond.first_violation ? jnum(*cond.first_violation) : json(nullptr)}};
  o.report["monotone"] = mono.monotone;
  o.report["monotonicity_violations"] = viol;
  o.report["points"] = pts;
  o.report["worst_identity_relative"] = jnum(worst_identity);
  o.report["unstable_points"] = unstable;
  o.report["unresolved_points"] = unresolved;
  o.report["nonzero_morse_points"] = nonzero_morse;
  o.report["turning_points"] = branch_json(br)["turning_points"];
  o.report["passed"] = ok;
  o.lines.push_back(fmt::format("stability condition f'(s)s < N f(s): {}", cond.holds ? "holds" : "fails"));
  o.lines.push_back(fmt::format("{} points, {} with principal eigenvalue <= 0, {} with Morse index > 0",
                                br.points.size(), unstable, nonzero_morse));
  o.lines.push_back(fmt::format("branch monotone: {}", mono.monotone ? "yes" : "no"));
  o.lines.push_back(fmt::format("worst integral identity residual (relative) {:.3e}", worst_identity));
  if (cfg.output.format == "csv")
    emit(o, cfg, "branch.csv", branch_csv(br));
  o.exit_code = ok ? kOk : kVerification;
  return o;
}

Outcome cmd_sturm(const RunConfig& cfg) {
  Outcome o;
  const auto suite = run_sturm_suite(cfg.output.seed, cfg.sturm.trials, cfg.sturm.mesh_n);
  const std::vector<std::size_t> sizes{257, 513, 1025, 2049};
  json refinement = json::array();
  double min_order = kInf, young = suite.young_min;
  for (int N : {1, 2}) {
    const double base = N == 1 ? 2.0 : 3.0;
    const auto ref = picone_refinement(Coefficient::constant(base), Coefficient::smooth_bump(base, 1.0, 0.5, 0.25),
                                       N, sizes);
    min_order = std::min(min_order, ref.min_order);
    young = std::min(young, ref.young_min);
    refinement.push_back({{"N", N}, {"sizes", ref.sizes}, {"residuals", ref.residuals}, {"orders", ref.orders}});
    o.lines.push_back(fmt::format("Picone residual N={}: {:.3e} -> {:.3e}, min observed order {:.2f}", N,
                                  ref.residuals.front(), ref.residuals.back(), ref.min_order));
  }
  json trials = json::array();
  for (const auto& t : suite.trials)
    trials.push_back({{"seed", t.seed},
                      {"N", t.N},
                      {"b2", t.b2_description},
                      {"zero_in_interior", t.zero_in_interior},
                      {"proportional", t.proportional},
                      {"mu_error", jnum(t.mu_error)},
                      {"young_min", jnum(t.young_min)}});
  const bool ok = suite.passed(1e-8) && min_order >= 2.0 && young >= -1e-10;
  o.report["trials"] = trials;
  o.report["zero_pass"] = suite.zero_pass;
  o.report["proportional_pass"] = suite.proportional_pass;
  o.report["max_mu_error"] = jnum(suite.max_mu_error);
  o.report["young_min"] = jnum(young);
  o.report["picone_refinement"] = refinement;
  o.report["passed"] = ok;
  const int n = static_cast<int>(suite.trials.size());
  o.lines.push_back(fmt::format("interior zero of u2: {}/{}", suite.zero_pass, n));
  o.lines.push_back(fmt::format("equality instances proportional: {}/{}, max mu error {:.3e}",
                                suite.proportional_pass, n, suite.max_mu_error));
  o.lines.push_back(fmt::format("min Young integrand {:.3e}", young));
  o.exit_code = ok ? kOk : kVerification;
  return o;
}

json set_json(const setlim::IntervalSet& s) {
  json parts = json::array();
  for (const auto& p : s.intervals())
    parts.push_back({{"lo", p.lo.to_string()}, {"hi", p.hi.to_string()}, {"lo_approx", jnum(p.lo.to_double())},
                     {"hi_approx", jnum(p.hi.to_double())}});
  return {{"text", setlim::to_string(s)},
          {"intervals", parts},
          {"components", setlim::components(s).size()},
          {"unbounded", setlim::is_unbounded(s)}};
}

Outcome cmd_setlimits(const RunConfig& cfg, bool use_example21) {
  using namespace setlim;
  Outcome o;
  const Rational eps = parse_rational(cfg.setlim.epsilon);
  const int W = cfg.setlim.window;
  const std::string family = use_example21 ? "example21" : cfg.setlim.family;
  bool ok = true;
  json checks = json::array();
  auto check = [&](const std::string& what, bool pass) {
    checks.push_back({{"check", what}, {"passed", pass}});
    ok = ok && pass;
    if (!pass)
      o.lines.push_back(fmt::format("FAIL {}", what));
  };
  SetLimits shown;
  if (family == "literal") {
    SetSequence seq;
    for (const auto& t : cfg.setlim.sequence)
      seq.terms.push_back(parse_set(t));
    seq.epsilon = eps;
    seq.window = W;
    shown = set_limits(seq);
    o.report["terms"] = seq.terms.size();
  } else {
    SequenceDescription desc;
    if (family == "example21")
      desc = example21();
    else if (family == "connected")
      desc = connected_example();
    else
      throw InvalidArgument(fmt::format("unknown setlim.family '{}'", family));
    const auto d = describe_limits(desc, eps, W, cfg.setlim.terms);
    shown = d.exact;
    o.report["literal"] = {{"terms", d.literal_terms},
                           {"limsup", set_json(d.literal.limsup)},
                           {"liminf", set_json(d.literal.liminf)}};
    o.report["limit_description_terms"] = d.exact_terms;
    o.lines.push_back(fmt::format("first {} terms as given: limsup {}, liminf {}", d.literal_terms,
                                  to_string(d.literal.limsup), to_string(d.literal.liminf)));
    check("literal liminf within literal limsup", subset(d.literal.liminf, d.literal.limsup));
    if (family == "example21") {
      check("limsup = [0, 2] u [3, +inf]", d.exact.limsup == parse_set("[0,2] u [3,+inf]"));
      check("liminf = [0, 1] u [3, +inf]", d.exact.liminf == parse_set("[0,1] u [3,+inf]"));
      check("2 components in both limits",
            components(d.exact.limsup).size() == 2 && components(d.exact.liminf).size() == 2);
    } else {
      check("limsup connected and unbounded", is_connected(d.exact.limsup) && is_unbounded(d.exact.limsup));
    }
  }
  check("liminf within limsup", subset(shown.liminf, shown.limsup));
  o.lines.insert(o.lines.begin(), {fmt::format("limsup: {}", to_string(shown.limsup)),
                                   fmt::format("liminf: {}", to_string(shown.liminf)),
                                   fmt::format("components: {}/{}", components(shown.limsup).size(),
                                               components(shown.liminf).size())});
  int incl = 0;
  for (int i = 0; i < cfg.setlim.random; ++i) {
    const auto seq = random_sequence(cfg.output.seed + static_cast<std::uint64_t>(i), std::max<std::size_t>(cfg.setlim.terms, 2 * W), eps, W);
    incl += subset(liminf_sets(seq), limsup_sets(seq));
  }
  if (cfg.setlim.random > 0) {
    check(fmt::format("liminf within limsup on {} random sequences", cfg.setlim.random), incl == cfg.setlim.random);
    o.lines.push_back(fmt::format("random sequences with liminf within limsup: {}/{}", incl, cfg.setlim.random));
  }
  o.report["family"] = family;
  o.report["epsilon"] = eps.str();
  o.report["window"] = W;
  o.report["limsup"] = set_json(shown.limsup);
  o.report["liminf"] = set_json(shown.liminf);
  o.report["checks"] = checks;
  o.report["passed"] = ok;
  o.exit_code = ok ? kOk : kVerification;
  return o;
}

} // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"eigen", "mu-scan",   "solve", "branch",
                                              "cases", "stability", "sturm", "setlimits"};
  return names;
}

Outcome run_subcommand(const std::string& name, const RunConfig& cfg, bool example21) {
  const bool solver = name != "setlimits" && name != "sturm";
  cfg.validate(solver);
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  if (name == "eigen")
    o = cmd_eigen(cfg);
  else if (name == "mu-scan")
    o = cmd_mu_scan(cfg);
  else if (name == "solve")
    o = cmd_solve(cfg);
  else if (name == "branch")
    o = cmd_branch(cfg);
  else if (name == "cases")
    o = cmd_cases(cfg);
  else if (name == "stability")
    o = cmd_stability(cfg);
  else if (name == "sturm")
    o = cmd_sturm(cfg);
  else if (name == "setlimits")
    o = cmd_setlimits(cfg, example21);
  else
    throw InvalidArgument(fmt::format("unknown subcommand '{}'", name));
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json report = {{"subcommand", name}, {"config", cfg.echo()}, {"results", o.report},
                 {"exit_code", o.exit_code}, {"timing_seconds", elapsed}};
  o.report = report;
  const auto path = out_path(cfg, fmt::format("{}_report.json", name));
  write_file(path, report.dump(2) + "\n");
  o.artifacts.push_back(path);
  return o;
}

int run(int argc, char** argv) {
  CLI::App app{"Radial Monge-Ampere eigenvalue, branch and comparison toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  bool example21 = false;
  const std::map<std::string, std::string> about{
      {"eigen", "principal eigenvalue by shooting and by Rayleigh descent"},
      {"mu-scan", "mu1 over a grid of p"},
      {"solve", "lambda for given amplitudes, or amplitudes for a given lambda"},
      {"branch", "amplitude sweep with CSV and SVG diagram"},
      {"cases", "classify f by its limits and check solution counts"},
      {"stability", "linearized spectrum and Morse index along the branch"},
      {"sturm", "randomized comparison suite and Picone residuals"},
      {"setlimits", "upper and lower limits of interval-set sequences"}};
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--set", overrides, "key=value override")->take_all();
    if (name == "setlimits")
      sub->add_flag("--example21", example21, "limits of the two-family counterexample sequence");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  try {
    if (sub->count("--out"))
      overrides.push_back("output.out_dir=" + json(out_dir).dump());
    if (sub->count("--seed"))
      overrides.push_back(fmt::format("output.seed={}", seed));
    const auto cfg = load_config(config_path, overrides);
    const auto o = run_subcommand(name, cfg, example21);
    for (const auto& l : o.lines)
      std::cout << l << '\n';
    for (const auto& a : o.artifacts)
      std::cout << "wrote " << a << '\n';
    if (o.exit_code == kVerification)
      std::cout << "verification failed\n";
    return o.exit_code;
  } catch (const Error& e) {
    std::cerr << "matool " << name << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "matool " << name << ": " << e.what() << '\n';
    return kUsage;
  }
}

} // namespace matool::cli
