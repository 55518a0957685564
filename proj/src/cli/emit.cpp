#include "matool/cli/emit.hpp"

#include "matool/error.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/core.h>
#include <fstream>

namespace matool::cli {

std::string num(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

nlohmann::json jnum(double x) {
  if (std::isfinite(x))
    return x;
  return num(x);
}

std::string branch_csv(const Branch& branch) {
  if (branch.points.empty())
    throw InvalidArgument("refusing to emit an empty branch");
  std::string out = "s,lambda,sup_norm,morse_index,principal_eig,stable\n";
  for (const auto& p : branch.points) {
    out += fmt::format("{},{},{},{},{},{}\n", num(p.s), num(p.lambda), num(p.sup_norm),
                       p.morse_index ? std::to_string(*p.morse_index) : std::string(),
                       p.principal_eig ? num(*p.principal_eig) : std::string(),
                       p.principal_eig ? (*p.principal_eig > 0.0 ? "1" : "0") : "");
  }
  return out;
}

std::string branch_svg(const Branch& branch, double lambda1) {
  if (branch.points.empty())
    throw InvalidArgument("refusing to draw an empty branch");
  constexpr double W = 800, H = 600, ml = 70, mr = 20, mt = 20, mb = 50;
  const int N = branch.spec.dimension();
  std::vector<double> guides;
  for (double lim : {branch.spec.f0(), branch.spec.finf()}) {
    const double t = linear_threshold(lambda1, lim, N);
    if (std::isfinite(t) && t > 0.0)
      guides.push_back(t);
  }
  double lmax = branch.max_lambda();
  for (double g : guides)
    lmax = std::max(lmax, g);
  lmax *= 1.05;
  double ylo = std::log10(branch.points.front().s), yhi = std::log10(branch.points.back().s);
  if (yhi <= ylo)
    yhi = ylo + 1.0;
  auto X = [&](double lam) { return ml + (W - ml - mr) * lam / lmax; };
  auto Y = [&](double s) { return H - mb - (H - mt - mb) * (std::log10(s) - ylo) / (yhi - ylo); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n", W, H);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", ml,
                     H - mb, W - mr);
  out += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", ml,
                     H - mb, mt);
  for (int k = static_cast<int>(std::ceil(ylo)); k <= static_cast<int>(std::floor(yhi)); ++k) {
    const double y = Y(std::pow(10.0, k));
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
                       ml - 6, y + 4, k);
  }
  for (int k = 0; k <= 4; ++k) {
    const double lam = lmax * k / 5.0;
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.4g}</text>\n",
                       X(lam), H - mb + 16, lam);
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">lambda</text>\n",
                     (ml + W - mr) / 2, H - 10);
  out += fmt::format("<text x=\"16\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\" "
                     "transform=\"rotate(-90 16 {:.2f})\">s = sup v</text>\n",
                     (mt + H - mb) / 2, (mt + H - mb) / 2);
  for (double g : guides)
    out += fmt::format("<line class=\"asymptote\" x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" "
                       "stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n",
                       X(g), H - mb, mt);
  out += "<polyline class=\"branch\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < branch.points.size(); ++i)
    out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", X(branch.points[i].lambda), Y(branch.points[i].s));
  out += "\"/>\n";
  for (const auto& tp : branch.turning_points)
    out += fmt::format("<circle class=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"crimson\"/>\n",
                       tp.maximum ? "turning-max" : "turning-min", X(tp.lambda), Y(tp.s));
  out += "</svg>\n";
  return out;
}

std::string mu_scan_csv(const MuScan& scan) {
  std::string out = "p,mu1\n";
  for (const auto& r : scan.rows)
    out += fmt::format("{},{}\n", num(r.p), num(r.mu1));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty())
    std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(fmt::format("cannot write '{}'", path));
  out << content;
  if (!out)
    throw Error(fmt::format("cannot write '{}'", path));
}

} // namespace matool::cli
