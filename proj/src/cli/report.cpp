#include "statbundle/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "statbundle/cli/io.hpp"

namespace statbundle::cli {

void CheckRecord::observe(double residual) {
  ++instances;
  if (std::isnan(residual)) {
    saw_nan = true;
    return;
  }
  max_residual = std::max(max_residual, std::abs(residual));
}

bool CheckRecord::pass() const noexcept {
  return instances > 0 && !saw_nan && max_residual <= threshold;
}

CheckRecord& Report::check(const std::string& name, double threshold) {
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const CheckRecord& c) { return c.name == name; });
  if (it != checks.end()) return *it;
  checks.push_back(CheckRecord{name, threshold});
  return checks.back();
}

bool Report::overall() const noexcept {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass(); });
}

void Report::print(std::ostream& out) const {
  char line[160];
  std::snprintf(line, sizeof line, "%-36s %9s %12s %12s  %s\n", "check", "instances",
                "max_resid", "threshold", "status");
  out << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-36s %9zu %12.3e %12.1e  %s\n", c.name.c_str(), c.instances,
                  c.saw_nan ? std::nan("") : c.max_residual, c.threshold,
                  c.pass() ? "PASS" : "FAIL");
    out << line;
  }
  std::snprintf(line, sizeof line, "overall: %s (%.3f s)\n", overall() ? "PASS" : "FAIL",
                wall_seconds);
  out << line;
}

void Report::write_csv(const std::filesystem::path& path) const {
  CsvWriter csv(path, {"check", "instances", "max_residual", "threshold", "pass"});
  for (const auto& c : checks) {
    csv.row(std::vector<std::string>{c.name, std::to_string(c.instances),
                                     c.saw_nan ? "nan" : format_number(c.max_residual),
                                     format_number(c.threshold), c.pass() ? "1" : "0"});
  }
}

}  // namespace statbundle::cli
