#include "apstruct/suite_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace apstruct {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

template <typename T>
T parse_number(const std::string& tok, int line, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    fail(line, std::string(what) + ": expected a number, got '" + tok + "'");
  return v;
}

void check_pattern(const std::string& pattern, int width, int line, const char* what) {
  if (static_cast<int>(pattern.size()) != width)
    fail(line, std::string(what) + ": pattern '" + pattern + "' must have " +
                   std::to_string(width) + " signs");
  for (char c : pattern)
    if (c != '+' && c != '-')
      fail(line, std::string(what) + ": pattern may contain only + and -");
}

CaseDescriptor parse_case(const std::vector<std::string>& toks, int line) {
  if (toks.size() < 2) fail(line, "case: missing kind (sphere or product)");
  CaseDescriptor d;
  if (toks[1] == "sphere")
    d.kind = CaseKind::kSphere;
  else if (toks[1] == "product")
    d.kind = CaseKind::kProduct;
  else
    fail(line, "case: unknown kind '" + toks[1] + "'");

  bool have_p = false, have_q = false, have_nu = false, have_eps = false;
  bool have_R = false, have_r = false, have_r3 = false;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == t.size())
      fail(line, "case: expected key=value, got '" + t + "'");
    const std::string key = t.substr(0, eq);
    const std::string value = t.substr(eq + 1);
    if (key == "p") {
      d.p = parse_number<int>(value, line, "p");
      have_p = true;
    } else if (key == "q") {
      d.q = parse_number<int>(value, line, "q");
      have_q = true;
    } else if (key == "nu") {
      d.nu = value;
      have_nu = true;
    } else if (key == "eps") {
      d.eps = value;
      have_eps = true;
    } else if (key == "R") {
      d.R = parse_number<double>(value, line, "R");
      have_R = true;
    } else if (key == "r") {
      d.r = parse_number<double>(value, line, "r");
      have_r = true;
    } else if (key == "r3") {
      d.r3 = parse_number<double>(value, line, "r3");
      have_r3 = true;
    } else {
      fail(line, "case: unknown key '" + key + "'");
    }
  }

  if (!have_p || !have_q || !have_nu || !have_eps)
    fail(line, "case: p, q, nu, and eps are required");
  if (d.p < 1) fail(line, "case: p must be >= 1");
  const int min_q = d.kind == CaseKind::kProduct ? 2 : 1;
  if (d.q < min_q)
    fail(line, "case: q must be >= " + std::to_string(min_q) + " for this kind");
  check_pattern(d.nu, d.p, line, "nu");
  check_pattern(d.eps, d.q, line, "eps");

  if (d.kind == CaseKind::kSphere) {
    if (!have_R) fail(line, "case: sphere needs R");
    if (have_r || have_r3) fail(line, "case: sphere takes R, not r/r3");
    if (!(d.R > 0)) fail(line, "case: R must be positive");
  } else {
    if (!have_r || !have_r3) fail(line, "case: product needs r and r3");
    if (have_R) fail(line, "case: product takes r and r3, not R");
    if (!(d.r > 0) || !(d.r3 > 0)) fail(line, "case: radii must be positive");
  }
  return d;
}

void expect_tokens(const std::vector<std::string>& toks, std::size_t n, int line) {
  if (toks.size() != n)
    fail(line, "'" + toks[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
}

}  // namespace

SuiteConfig parse_suite_config(std::istream& in) {
  SuiteConfig cfg;
  bool saw_version = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "version") {
      expect_tokens(toks, 2, line_no);
      if (parse_number<int>(toks[1], line_no, "version") != 1)
        fail(line_no, "unsupported config version '" + toks[1] + "'");
      saw_version = true;
    } else if (key == "seed") {
      expect_tokens(toks, 2, line_no);
      cfg.seed = parse_number<std::uint64_t>(toks[1], line_no, "seed");
    } else if (key == "n_points") {
      expect_tokens(toks, 2, line_no);
      cfg.n_points = parse_number<int>(toks[1], line_no, "n_points");
      if (cfg.n_points < 1) fail(line_no, "n_points must be >= 1");
    } else if (key == "n_tangents") {
      expect_tokens(toks, 2, line_no);
      cfg.n_tangents = parse_number<int>(toks[1], line_no, "n_tangents");
      if (cfg.n_tangents < 1) fail(line_no, "n_tangents must be >= 1");
    } else if (key == "format") {
      expect_tokens(toks, 2, line_no);
      if (toks[1] == "json")
        cfg.format = ReportFormat::kJson;
      else if (toks[1] == "csv")
        cfg.format = ReportFormat::kCsv;
      else
        fail(line_no, "format must be json or csv");
    } else if (key == "output") {
      expect_tokens(toks, 2, line_no);
      cfg.output_path = toks[1];
    } else if (key == "tolerance") {
      expect_tokens(toks, 3, line_no);
      const double v = parse_number<double>(toks[2], line_no, "tolerance");
      if (!(v > 0)) fail(line_no, "tolerance must be positive");
      if (toks[1] == "default")
        cfg.tolerances.fallback = v;
      else
        cfg.tolerances.overrides[toks[1]] = v;
    } else if (key == "case") {
      cfg.cases.push_back(parse_case(toks, line_no));
    } else {
      fail(line_no, "unknown directive '" + key + "'");
    }
  }
  if (!saw_version) throw ConfigError("missing required directive: version");
  return cfg;
}

SuiteConfig parse_suite_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_suite_config(in);
}

SuiteConfig load_suite_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse_suite_config(in);
}

std::vector<std::string> default_sign_patterns(int width) {
  detail::require(width >= 1, "default_sign_patterns: width must be positive");
  const std::size_t n = static_cast<std::size_t>(width);
  std::string alternating(n, '+');
  for (std::size_t i = 1; i < n; i += 2) alternating[i] = '-';
  const std::string candidates[] = {
      std::string(n, '+'),
      std::string(n, '-'),
      alternating,
      "-" + std::string(n - 1, '+'),
  };
  std::vector<std::string> out;
  for (const auto& c : candidates)
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

SuiteConfig default_suite_config() {
  SuiteConfig cfg;
  const double radii[] = {0.5, 1.0, 2.0};
  const std::pair<double, double> shapes[] = {{1.0, 1.0}, {0.5, 2.0}, {2.0, 0.5}};
  for (int p = 1; p <= 3; ++p) {
    for (int q = 2; q <= 4; ++q) {
      for (const auto& nu : default_sign_patterns(p)) {
        for (const auto& eps : default_sign_patterns(q)) {
          for (const double R : radii) {
            CaseDescriptor d;
            d.kind = CaseKind::kSphere;
            d.p = p;
            d.q = q;
            d.nu = nu;
            d.eps = eps;
            d.R = R;
            cfg.cases.push_back(d);
          }
          for (const double R : radii) {
            for (const auto& [sr, sr3] : shapes) {
              CaseDescriptor d;
              d.kind = CaseKind::kProduct;
              d.p = p;
              d.q = q;
              d.nu = nu;
              d.eps = eps;
              const double scale = R / std::hypot(sr, sr3);
              d.r = sr * scale;
              d.r3 = sr3 * scale;
              cfg.cases.push_back(d);
            }
          }
        }
      }
    }
  }
  return cfg;
}

}  // namespace apstruct
