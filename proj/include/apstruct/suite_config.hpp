#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "apstruct/types.hpp"

namespace apstruct {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class CaseKind { kSphere, kProduct };

// One verification case: a block-swap structure (p, q, nu, eps) together
// with the submanifold it is restricted to. Sphere cases carry the radius R;
// product cases carry the factor radii (r, r3).
struct CaseDescriptor {
  CaseKind kind = CaseKind::kSphere;
  int p = 1;
  int q = 2;
  std::string nu;
  std::string eps;
  double R = 1.0;
  double r = 0.0;
  double r3 = 0.0;
};

// Per-identity tolerances with a fallback for ids without an override.
struct Tolerances {
  double fallback = kDefaultIdentityTol;
  std::map<std::string, double, std::less<>> overrides;

  double get(std::string_view id) const {
    auto it = overrides.find(id);
    return it == overrides.end() ? fallback : it->second;
  }
};

enum class ReportFormat { kJson, kCsv };

struct SuiteConfig {
  std::uint64_t seed = 42;
  int n_points = 100;
  int n_tangents = 8;
  Tolerances tolerances;
  ReportFormat format = ReportFormat::kJson;
  std::string output_path;  // empty: the CLI picks a default
  std::vector<CaseDescriptor> cases;
};

// Text format, one directive per line, # starts a comment:
//
//   version 1
//   seed 42
//   n_points 100
//   n_tangents 8
//   format json
//   output report.json
//   tolerance default 1e-10
//   tolerance c1.p_gram 1e-9
//   case sphere p=1 q=2 nu=+ eps=+- R=1
//   case product p=2 q=3 nu=+- eps=+++ r=1 r3=2
//
// Unknown directives, malformed values, and inconsistent sign patterns are
// reported as ConfigError with the offending line number.
SuiteConfig parse_suite_config(std::istream& in);
SuiteConfig parse_suite_config_text(const std::string& text);

// Reads and parses a config file; a missing or unreadable file is a
// ConfigError naming the path.
SuiteConfig load_suite_config(const std::filesystem::path& path);

// The built-in verification grid: spheres for p in 1..3, q in 2..4, four nu
// and eps patterns each (deduplicated), R in {0.5, 1, 2}; products over the
// same structures with factor shapes (1, 1), (0.5, 2), (2, 0.5) scaled so
// the enclosing radius matches R.
SuiteConfig default_suite_config();

// The sign patterns used by the default grid for a block of the given
// width: all plus, all minus, alternating, minus-then-plus (duplicates
// removed, order kept).
std::vector<std::string> default_sign_patterns(int width);

}  // namespace apstruct
