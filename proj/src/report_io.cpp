#include "apstruct/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <string_view>
#include <system_error>

#include "json.hpp"

namespace apstruct {

namespace {

// 17 significant digits: enough for every double to round-trip exactly.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_quoted(std::string& out, std::string_view s) {
  out += '"';
  for (const char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
      out += buf;
    } else {
      out += c;
    }
  }
  out += '"';
}

void append_descriptor(std::string& out, const CaseDescriptor& d) {
  out += "{\"kind\":";
  append_quoted(out, d.kind == CaseKind::kSphere ? "sphere" : "product");
  out += ",\"p\":";
  out += std::to_string(d.p);
  out += ",\"q\":";
  out += std::to_string(d.q);
  out += ",\"nu\":";
  append_quoted(out, d.nu);
  out += ",\"eps\":";
  append_quoted(out, d.eps);
  if (d.kind == CaseKind::kSphere) {
    out += ",\"R\":";
    out += fmt_double(d.R);
  } else {
    out += ",\"r\":";
    out += fmt_double(d.r);
    out += ",\"r3\":";
    out += fmt_double(d.r3);
  }
  out += '}';
}

void append_report(std::string& out, const IdentityReport& r) {
  out += "{\"identity_id\":";
  append_quoted(out, r.identity_id);
  out += ",\"samples\":";
  out += std::to_string(r.samples);
  out += ",\"max_residual\":";
  out += fmt_double(r.max_residual);
  out += ",\"tolerance\":";
  out += fmt_double(r.tolerance);
  out += ",\"passed\":";
  out += r.passed ? "true" : "false";
  out += ",\"worst_case\":{\"case_index\":";
  out += std::to_string(r.worst_case.case_index);
  out += ",\"point_index\":";
  out += std::to_string(r.worst_case.point_index);
  out += ",\"tangent_index\":";
  out += std::to_string(r.worst_case.tangent_index);
  out += ",\"point_seed\":";
  out += std::to_string(r.worst_case.point_seed);
  out += "}}";
}

[[noreturn]] void bad_report(const std::string& detail) {
  throw IoError("report parse error: " + detail);
}

}  // namespace

std::string suite_report_to_json(const SuiteReport& report) {
  std::string out;
  out.reserve(4096);
  out += "{\n\"schema_version\": ";
  out += std::to_string(report.schema_version);
  out += ",\n\"seed\": ";
  out += std::to_string(report.seed);
  out += ",\n\"cases\": [";
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += "{\"descriptor\": ";
    append_descriptor(out, report.cases[i].descriptor);
    out += ",\n \"reports\": [";
    const auto& reports = report.cases[i].reports;
    for (std::size_t j = 0; j < reports.size(); ++j) {
      out += j == 0 ? "\n  " : ",\n  ";
      append_report(out, reports[j]);
    }
    out += "\n ]}";
  }
  out += "\n]}\n";
  return out;
}

std::string suite_report_to_csv(const SuiteReport& report) {
  std::string out =
      "case_index,kind,p,q,nu,eps,R,r,r3,identity_id,samples,max_residual,"
      "tolerance,passed,worst_point_index,worst_tangent_index,worst_point_seed\n";
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const CaseDescriptor& d = report.cases[i].descriptor;
    const bool sphere = d.kind == CaseKind::kSphere;
    for (const IdentityReport& r : report.cases[i].reports) {
      out += std::to_string(i);
      out += sphere ? ",sphere," : ",product,";
      out += std::to_string(d.p);
      out += ',';
      out += std::to_string(d.q);
      out += ',';
      out += d.nu;
      out += ',';
      out += d.eps;
      out += ',';
      if (sphere) {
        out += fmt_double(d.R);
        out += ",,,";
      } else {
        out += ',';
        out += fmt_double(d.r);
        out += ',';
        out += fmt_double(d.r3);
        out += ',';
      }
      out += r.identity_id;
      out += ',';
      out += std::to_string(r.samples);
      out += ',';
      out += fmt_double(r.max_residual);
      out += ',';
      out += fmt_double(r.tolerance);
      out += ',';
      out += r.passed ? "true" : "false";
      out += ',';
      out += std::to_string(r.worst_case.point_index);
      out += ',';
      out += std::to_string(r.worst_case.tangent_index);
      out += ',';
      out += std::to_string(r.worst_case.point_seed);
      out += '\n';
    }
  }
  return out;
}

SuiteReport suite_report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_report(e.what());
  }
  try {
    SuiteReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != kReportSchemaVersion)
      bad_report("unsupported schema_version " +
                 std::to_string(report.schema_version));
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jc : j.at("cases")) {
      CaseReport cr;
      const auto& jd = jc.at("descriptor");
      const std::string kind = jd.at("kind").get<std::string>();
      if (kind == "sphere")
        cr.descriptor.kind = CaseKind::kSphere;
      else if (kind == "product")
        cr.descriptor.kind = CaseKind::kProduct;
      else
        bad_report("unknown case kind '" + kind + "'");
      cr.descriptor.p = jd.at("p").get<int>();
      cr.descriptor.q = jd.at("q").get<int>();
      cr.descriptor.nu = jd.at("nu").get<std::string>();
      cr.descriptor.eps = jd.at("eps").get<std::string>();
      if (cr.descriptor.kind == CaseKind::kSphere) {
        cr.descriptor.R = jd.at("R").get<double>();
      } else {
        cr.descriptor.r = jd.at("r").get<double>();
        cr.descriptor.r3 = jd.at("r3").get<double>();
      }
      for (const auto& jr : jc.at("reports")) {
        IdentityReport r;
        r.identity_id = jr.at("identity_id").get<std::string>();
        r.samples = jr.at("samples").get<std::int64_t>();
        r.max_residual = jr.at("max_residual").get<double>();
        r.tolerance = jr.at("tolerance").get<double>();
        r.passed = jr.at("passed").get<bool>();
        const auto& jw = jr.at("worst_case");
        r.worst_case.case_index = jw.at("case_index").get<std::int64_t>();
        r.worst_case.point_index = jw.at("point_index").get<std::int64_t>();
        r.worst_case.tangent_index = jw.at("tangent_index").get<std::int64_t>();
        r.worst_case.point_seed = jw.at("point_seed").get<std::uint64_t>();
        cr.reports.push_back(std::move(r));
      }
      report.cases.push_back(std::move(cr));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    bad_report(e.what());
  }
}

void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw IoError("output directory does not exist: " + dir.string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot move report into place at " + path.string() + ": " +
                  ec.message());
  }
}

}  // namespace apstruct
