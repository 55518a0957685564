#include "matool/branch.hpp"
#include "matool/bvp.hpp"
#include "matool/cli/run.hpp"
#include "matool/compare.hpp"
#include "matool/eigen.hpp"
#include "matool/setlim.hpp"
#include "matool/stability.hpp"
#include "oracles.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

using namespace matool;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, fmt::format("threw: {}", e.what())};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !v.pass;
  fmt::print("{} [{:2}] {}: {} ({:.2f} s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail, dt);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MeshPtr ball(std::size_t n, double R = 1.0, WeightFunction a = WeightFunction::constant()) {
  return RadialMesh::build(n, R, std::move(a));
}

/// Tally of hygiene over every accepted solution met by the criteria.
struct Hygiene {
  int checked = 0;
  int failed = 0;
  std::string first_failure;

  void add(const ShotResult& shot, const std::string& where) {
    const auto h = check_hygiene(shot);
    ++checked;
    if (!h.ok()) {
      if (failed == 0)
        first_failure = fmt::format("{} at s={}", where, shot.amplitude);
      ++failed;
    }
  }
  void add(const Branch& br, const std::string& where) {
    for (const auto& p : br.points)
      add(br.profile(p), where);
  }
};

Hygiene hygiene;

constexpr double kL1 = M_PI * M_PI / 4;

} // namespace

int main() {
  report(1, "lambda1 closed form", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto mesh = ball(4096);
    const auto sh = eig_shoot(2.0, mesh);
    const auto ry = eig_rayleigh(2.0, mesh);
    const double t = seconds_since(t0);
    const double es = std::abs(sh.mu1 - kL1), er = std::abs(ry.mu1 - kL1);
    return Verdict{es < 1e-6 && er < 1e-6 && t < 2.0,
                   fmt::format("shooting err {:.2e}, rayleigh err {:.2e}, {:.2f} s (limit 2 s)", es, er, t)};
  });

  report(2, "shooting vs Rayleigh", [] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& a : {WeightFunction::constant(), WeightFunction::linear()})
      for (double p : {2.0, 3.0, 4.0}) {
        const auto mesh = ball(2049, 1.0, a);
        const double s = eig_shoot(p, mesh).mu1, r = eig_rayleigh(p, mesh).mu1;
        worst = std::max(worst, std::abs(s - r) / s);
      }
    const double t = seconds_since(t0);
    return Verdict{worst < 1e-4 && t < 30.0, fmt::format("worst gap {:.2e}, {:.2f} s (limit 30 s)", worst, t)};
  });

  report(3, "continuity of mu1 in p", [] {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i)
      grid.push_back(2.0 + i / 10.0);
    const auto scan = mu1_scan(grid, ball(2049));
    const auto chk = check_mu_scan(scan);
    return Verdict{chk.small_steps && chk.no_spikes,
                   fmt::format("worst step {:.4f} mu1, {} spikes", chk.worst_step, chk.spikes.size())};
  });

  report(4, "radius scaling", [] {
    const double unit = eig_shoot(2.0, ball(2049)).mu1;
    double worst = 0.0;
    for (double R : {0.5, 2.0}) {
      const double l = eig_shoot(2.0, ball(2049, R)).mu1;
      worst = std::max(worst, std::abs(scale_to_ball(l, R, WeightFunction::constant()) - unit) / unit);
    }
    return Verdict{worst < 1e-4, fmt::format("worst relative error {:.2e}", worst)};
  });

  report(5, "homogeneous vertical branch", [] {
    double worst = 0.0;
    for (int N : {1, 2}) {
      const auto mesh = ball(2049);
      const double l1 = eig_shoot(N + 1.0, mesh).mu1;
      const auto br = sweep(Nonlinearity::homogeneous(N), mesh, log_grid(1e-3, 1e3, 8));
      hygiene.add(br, "homogeneous");
      for (const auto& p : br.points)
        worst = std::max(worst, std::abs(p.lambda - l1));
      if (br.points.size() != 49)
        return Verdict{false, fmt::format("N={}: {} of 49 amplitudes solved", N, br.points.size())};
    }
    return Verdict{worst < 1e-5, fmt::format("max |lambda(s) - lambda1| = {:.2e}", worst)};
  });

  report(6, "case (ii) monotone uniqueness", [] {
    auto br = sweep(Nonlinearity::ratpow(1, 1, 1), ball(2049), default_amplitude_grid());
    hygiene.add(br, "s/(1+s)");
    annotate_stability(br);
    const auto mono = branch_monotonicity(br);
    bool increasing = true;
    for (std::size_t i = 1; i < br.points.size(); ++i)
      increasing = increasing && br.points[i].lambda > br.points[i - 1].lambda;
    const auto asym = estimate_asymptotes(br, br.spec, kL1);
    const double zero_err = std::abs(asym.zero.value - kL1);
    bool counts = count_solutions(br, 0.9 * kL1).count == 0;
    for (double k : {1.2, 2.0, 5.0})
      counts = counts && count_solutions(br, k * kL1).count == 1;
    int bad_spectral = 0;
    for (const auto& p : br.points)
      bad_spectral += !(p.morse_index == 0 && p.principal_eig && *p.principal_eig > 0.0);
    const bool ok = increasing && mono.monotone && zero_err < 1e-3 && counts && bad_spectral == 0;
    return Verdict{ok, fmt::format("{} points, increasing {}, pointwise ordered {}, |asymptote - lambda1| {:.2e}, "
                                   "counts {}, unstable/unresolved {}",
                                   br.points.size(), increasing, mono.monotone, zero_err, counts ? "ok" : "wrong",
                                   bad_spectral)};
  });

  report(7, "case (ix) fold", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> stars;
    for (std::size_t n : {1024, 2048}) {
      const auto br = sweep(Nonlinearity::exponential(1), ball(n), default_amplitude_grid(96));
      hygiene.add(br, fmt::format("exponential n={}", n));
      if (br.turning_points.size() != 1 || !br.turning_points.front().maximum)
        return Verdict{false, fmt::format("n={}: {} turning points", n, br.turning_points.size())};
      stars.push_back(br.turning_points.front().lambda);
      if (n == 2048) {
        const int two = count_solutions(br, 0.5).count, none = count_solutions(br, 1.1 * stars.back()).count;
        if (two != 2 || none != 0)
          return Verdict{false, fmt::format("counts {} at 0.5 and {} at 1.1 lambda*", two, none)};
      }
    }
    const auto f = Nonlinearity::exponential(1);
    const auto roots = solve_amplitudes_for_lambda(0.5, f, ball(2048), default_amplitude_grid());
    if (roots.size() != 2)
      return Verdict{false, fmt::format("{} solutions at lambda 0.5", roots.size())};
    std::vector<int> morse;
    for (const auto& r : roots) {
      hygiene.add(r.shot, "exponential lambda=0.5");
      morse.push_back(morse_index(linearize(r.shot, f)).index);
    }
    const double spread = std::abs(stars[0] - stars[1]);
    const double oracle_err = std::abs(stars[1] - oracle::gelfand_lambda_star());
    const double t = seconds_since(t0);
    const bool ok = spread < 1e-3 && oracle_err < 1e-3 && morse[0] == 0 && morse[1] == 1 && t < 60.0;
    return Verdict{ok, fmt::format("lambda* = {:.10f} / {:.10f}, closed form {:.10f}, Morse {}/{}, {:.2f} s (limit 60 s)",
                                   stars[0], stars[1], oracle::gelfand_lambda_star(), morse[0], morse[1], t)};
  });

  report(8, "case (v) interior minimum", [] {
    const auto br = sweep(Nonlinearity::ratpow(2, 2, 1), ball(2049), default_amplitude_grid());
    hygiene.add(br, "s^2/(1+s^2)");
    if (br.turning_points.size() != 1 || br.turning_points.front().maximum)
      return Verdict{false, fmt::format("{} turning points", br.turning_points.size())};
    const double low = br.turning_points.front().lambda;
    const int two = count_solutions(br, 2 * low).count, none = count_solutions(br, 0.5 * low).count;
    return Verdict{two == 2 && none == 0,
                   fmt::format("lambda_* = {:.8f}, count {} at 2 lambda_*, {} at lambda_*/2", low, two, none)};
  });

  report(9, "cases (vi)/(vii) existence", [] {
    std::string detail;
    bool ok = true;
    for (const auto& f : {Nonlinearity::power(2, 1, 1), Nonlinearity::ratpow(0.5, 0.25, 1)}) {
      const auto br = sweep(f, ball(2049), default_amplitude_grid());
      hygiene.add(br, f.id());
      detail += f.id() + to_string(case_of(f)) + ":";
      for (double lam : {0.1, 1.0, 10.0}) {
        const int c = count_solutions(br, lam).count;
        ok = ok && c >= 1;
        detail += fmt::format(" {}", c);
      }
      detail += "; ";
    }
    return Verdict{ok, "counts at lambda 0.1, 1, 10 " + detail};
  });

  report(10, "Sturm comparison suite", [] {
    const auto rep = run_sturm_suite(1, 100);
    const int n = static_cast<int>(rep.trials.size());
    return Verdict{rep.zero_pass == n && rep.proportional_pass == n && rep.max_mu_error <= 1e-8,
                   fmt::format("interior zero {}/{}, proportional {}/{}, mu error {:.2e}", rep.zero_pass, n,
                               rep.proportional_pass, n, rep.max_mu_error)};
  });

  report(11, "Picone identity", [] {
    const std::vector<std::size_t> sizes{257, 513, 1025, 2049};
    double order = 1e300;
    double young = run_sturm_suite(1, 100).young_min;
    for (int N : {1, 2}) {
      const double base = N == 1 ? 2.0 : 3.0;
      const auto ref = picone_refinement(Coefficient::constant(base), Coefficient::smooth_bump(base, 1.0, 0.5, 0.25),
                                         N, sizes);
      order = std::min(order, ref.min_order);
      young = std::min(young, ref.young_min);
    }
    return Verdict{order >= 2.0 && young >= -1e-10,
                   fmt::format("min observed order {:.2f}, min Young integrand {:.2e}", order, young)};
  });

  report(12, "linearized integral identity", [] {
    auto br = sweep(Nonlinearity::ratpow(1, 1, 1), ball(2048), default_amplitude_grid(12));
    hygiene.add(br, "s/(1+s) n=2048");
    const auto ids = annotate_stability(br, true);
    double worst = 0.0;
    int missing = 0;
    for (const auto& id : ids) {
      if (!id) {
        ++missing;
        continue;
      }
      worst = std::max(worst, id->relative);
    }
    return Verdict{worst < 1e-4 && missing == 0,
                   fmt::format("{} solutions, worst relative residual {:.2e}, unresolved {}", ids.size(), worst, missing)};
  });

  report(13, "set limits of the counterexample", [] {
    cli::RunConfig cfg;
    const auto dir = std::filesystem::temp_directory_path() / "matool_acceptance";
    cfg.output.out_dir = dir.string();
    const auto o = cli::run_subcommand("setlimits", cfg, true);
    const bool lines = o.lines.size() >= 3 && o.lines[0] == "limsup: [0, 2] u [3, +inf]" &&
                       o.lines[1] == "liminf: [0, 1] u [3, +inf]" && o.lines[2] == "components: 2/2";
    int incl = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto q = setlim::random_sequence(seed, 40, setlim::Rational(1, 20), 4);
      incl += setlim::subset(setlim::liminf_sets(q), setlim::limsup_sets(q));
    }
    return Verdict{lines && incl == 50 && o.exit_code == cli::kOk,
                   fmt::format("{} | {} | {}; random inclusion {}/50", o.lines.size() > 0 ? o.lines[0] : "",
                               o.lines.size() > 1 ? o.lines[1] : "", o.lines.size() > 2 ? o.lines[2] : "", incl)};
  });

  report(14, "solution hygiene", [] {
    return Verdict{hygiene.checked > 0 && hygiene.failed == 0,
                   fmt::format("{} accepted solutions checked, {} failed{}", hygiene.checked, hygiene.failed,
                               hygiene.failed ? ", first: " + hygiene.first_failure : "")};
  });

  fmt::print("{} of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
