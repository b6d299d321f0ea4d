#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "apstruct/induced.hpp"
#include "apstruct/report_io.hpp"
#include "apstruct/suite.hpp"
#include "apstruct/suite_config.hpp"
#include "apstruct/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitIoError = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vec(const apstruct::Vec<double>& v) {
  std::string out = "(";
  for (apstruct::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(v[i]);
  }
  out += ")";
  return out;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> coords;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string tok = text.substr(start, end - start);
    double v{};
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw std::invalid_argument("--point: expected comma-separated numbers, got '" +
                                  tok + "'");
    coords.push_back(v);
    start = end + 1;
  }
  return coords;
}

struct InduceArgs {
  bool sphere = false;
  bool product = false;
  int p = 0;
  int q = 0;
  std::string nu;
  std::string eps;
  double R = 0.0;
  double r = 0.0;
  double r3 = 0.0;
  std::string point;
  double tol = apstruct::kDefaultMembershipTol;
};

void print_structure(const apstruct::InducedStructure<double>& st, const char* kind) {
  std::printf("kind = %s\n", kind);
  std::printf("m = %lld\n", static_cast<long long>(st.base.coords.size()));
  std::printf("codim = %lld\n", static_cast<long long>(st.codim()));
  std::printf("point = %s\n", fmt_vec(st.base.coords).c_str());
  for (apstruct::Index i = 0; i < st.a.rows(); ++i)
    for (apstruct::Index j = 0; j < st.a.cols(); ++j)
      std::printf("a%lld%lld = %s\n", static_cast<long long>(i + 1),
                  static_cast<long long>(j + 1), fmt(st.a(i, j)).c_str());
  for (apstruct::Index i = 0; i < st.xi.cols(); ++i)
    std::printf("xi%lld = %s\n", static_cast<long long>(i + 1),
                fmt_vec(st.xi.col(i)).c_str());
  for (apstruct::Index i = 0; i < st.frame.cols(); ++i)
    std::printf("N%lld = %s\n", static_cast<long long>(i + 1),
                fmt_vec(st.frame.col(i)).c_str());
}

int run_induce(const InduceArgs& args) {
  if (args.sphere == args.product)
    throw std::invalid_argument("induce: pass exactly one of --sphere and --product");
  const apstruct::BlockSwap<double> bs(
      args.p, args.q, apstruct::signs_from_string(args.nu),
      apstruct::signs_from_string(args.eps));
  const apstruct::AmbientStructure<double> s(bs);
  const std::vector<double> raw = parse_point(args.point);
  apstruct::Vec<double> coords(static_cast<apstruct::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i)
    coords[static_cast<apstruct::Index>(i)] = raw[i];
  if (coords.size() != s.dim())
    throw std::invalid_argument("--point: expected " + std::to_string(s.dim()) +
                                " coordinates, got " + std::to_string(coords.size()));

  const auto reject_off_manifold = [&](double residual) {
    std::fprintf(stderr,
                 "error: point is not on the submanifold "
                 "(membership residual %s, tolerance %s)\n",
                 fmt(residual).c_str(), fmt(args.tol).c_str());
    return kExitBadInput;
  };

  if (args.sphere) {
    if (!(args.R > 0)) throw std::invalid_argument("induce --sphere: --R must be positive");
    const apstruct::Hypersphere<double> sphere(s.dim(), args.R);
    const double residual = sphere.membership_residual(coords);
    if (residual > args.tol) return reject_off_manifold(residual);
    const auto st = apstruct::induce_at_point(s, sphere, {coords}, args.tol);
    print_structure(st, "sphere");
  } else {
    if (!(args.r > 0) || !(args.r3 > 0))
      throw std::invalid_argument("induce --product: --r and --r3 must be positive");
    const apstruct::ProductOfSpheres<double> product(args.p, args.q, args.r, args.r3);
    const double residual = product.membership_residual(coords);
    if (residual > args.tol) return reject_off_manifold(residual);
    const auto st = apstruct::induce_at_point(s, product, {coords}, args.tol);
    print_structure(st, "product");
  }
  return kExitOk;
}

int run_verify(const std::string& config_path, const std::string& out_path,
               const std::string& format_flag) {
  apstruct::SuiteConfig cfg = config_path.empty()
                                  ? apstruct::default_suite_config()
                                  : apstruct::load_suite_config(config_path);
  if (format_flag == "json")
    cfg.format = apstruct::ReportFormat::kJson;
  else if (format_flag == "csv")
    cfg.format = apstruct::ReportFormat::kCsv;
  else if (!format_flag.empty())
    throw std::invalid_argument("--format must be json or csv");
  if (!out_path.empty()) cfg.output_path = out_path;
  if (cfg.output_path.empty())
    cfg.output_path = cfg.format == apstruct::ReportFormat::kJson
                          ? "apstruct_report.json"
                          : "apstruct_report.csv";

  const apstruct::SuiteReport report = apstruct::run_full_suite(cfg);
  const std::string payload = cfg.format == apstruct::ReportFormat::kJson
                                  ? apstruct::suite_report_to_json(report)
                                  : apstruct::suite_report_to_csv(report);
  apstruct::write_text_file_atomic(cfg.output_path, payload);

  std::int64_t n_reports = 0, n_failed = 0;
  double worst = 0.0;
  for (const auto& c : report.cases) {
    for (const auto& r : c.reports) {
      ++n_reports;
      worst = std::max(worst, r.max_residual);
      if (!r.passed) ++n_failed;
    }
  }
  std::printf("cases: %zu\n", report.cases.size());
  std::printf("identity reports: %lld\n", static_cast<long long>(n_reports));
  std::printf("failures: %lld\n", static_cast<long long>(n_failed));
  std::printf("largest residual: %s\n", fmt(worst).c_str());
  std::printf("report: %s\n", cfg.output_path.c_str());
  if (n_failed > 0) {
    for (std::size_t i = 0; i < report.cases.size(); ++i)
      for (const auto& r : report.cases[i].reports)
        if (!r.passed)
          std::printf("failed: case %zu %s max_residual %s tolerance %s\n", i,
                      r.identity_id.c_str(), fmt(r.max_residual).c_str(),
                      fmt(r.tolerance).c_str());
    return kExitIdentityFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"induced structures on spheres and products of spheres"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand(
      "verify", "run the identity verification suite and write a report");
  std::string config_path, out_path, format_flag;
  verify->add_option("--config", config_path,
                     "suite config file (omit for the built-in grid)");
  verify->add_option("--out", out_path, "report output path");
  verify->add_option("--format", format_flag, "report format: json or csv");

  auto* induce = app.add_subcommand(
      "induce", "decompose the structure at one submanifold point");
  InduceArgs args;
  induce->add_flag("--sphere", args.sphere, "restrict to the sphere of radius R");
  induce->add_flag("--product", args.product,
                   "restrict to the product of spheres with radii r, r3");
  induce->add_option("--p", args.p, "swap block width")->required();
  induce->add_option("--q", args.q, "fixed block width")->required();
  induce->add_option("--nu", args.nu, "swap block signs, e.g. +-")->required();
  induce->add_option("--eps", args.eps, "fixed block signs, e.g. ++-")->required();
  induce->add_option("--R", args.R, "sphere radius");
  induce->add_option("--r", args.r, "first factor radius");
  induce->add_option("--r3", args.r3, "second factor radius");
  induce->add_option("--point", args.point, "comma-separated coordinates")->required();
  induce->add_option("--tol", args.tol, "membership tolerance");

  auto* version = app.add_subcommand("version", "print version information");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (version->parsed()) {
      std::printf("apstruct %s (report schema %d)\n", apstruct::kVersionString,
                  apstruct::kReportSchemaVersion);
      return kExitOk;
    }
    if (induce->parsed()) return run_induce(args);
    return run_verify(config_path, out_path, format_flag);
  } catch (const apstruct::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIoError;
  } catch (const apstruct::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  }
}
