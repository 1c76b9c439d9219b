#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bhsi/scenarios.hpp"

namespace bhsi::cli {

inline constexpr const char* kSchema = "bhsi-report/1";

enum class Format { Json, Csv };

struct SerializeOptions {
  Format format = Format::Json;
  bool records = false;
  // Significant digits kept for floating-point values; 17 is lossless.
  int digits = 17;
};

Json to_json(const ScenarioReport& report, bool records = false, int digits = 17);
std::string serialize(const ScenarioReport& report, const SerializeOptions& opts = {});

// Rounds to `digits` significant decimal digits (1..17).
double round_significant(double v, int digits);

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// `tol` applies to the exact (non-statistical) checks.
std::vector<SelftestCheck> selftest(double tol);

// args excludes the program name. Exit codes: 0 ok, 1 usage or configuration
// error, 2 internal invariant violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bhsi::cli
