#pragma once

#include "matool/branch.hpp"
#include "matool/eigen.hpp"

#include <json.hpp>

#include <string>

namespace matool::cli {

/// Columns s,lambda,sup_norm,morse_index,principal_eig,stable. Throws on an empty branch.
std::string branch_csv(const Branch& branch);

/// 800x600, lambda across, log10 s up. Turning points get class turning-max / turning-min;
/// dashed guides at the linear thresholds when finite and positive.
std::string branch_svg(const Branch& branch, double lambda1);

std::string mu_scan_csv(const MuScan& scan);

/// Shortest round-trip text for a double; "inf"/"-inf"/"nan" for non-finite values.
std::string num(double x);

/// JSON number, or the strings "inf", "-inf", "nan".
nlohmann::json jnum(double x);

void write_file(const std::string& path, const std::string& content);

} // namespace matool::cli
