#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "apstruct/suite.hpp"

namespace apstruct {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Serialises a suite report. Numbers carry 17 significant digits so doubles
// round-trip exactly, and the output is byte-deterministic for a given
// report. The JSON layout is
//
//   { "schema_version": 1, "seed": 42,
//     "cases": [ { "descriptor": {...}, "reports": [ {...} ] } ] }
//
// with one report object per identity carrying identity_id, samples,
// max_residual, tolerance, passed, and worst_case.
std::string suite_report_to_json(const SuiteReport& report);

// Flat CSV projection of the same data, one row per identity report.
std::string suite_report_to_csv(const SuiteReport& report);

// Parses a report produced by suite_report_to_json; numeric fields
// round-trip exactly. Malformed input raises IoError.
SuiteReport suite_report_from_json(const std::string& text);

// Writes via a sibling temporary file and rename, so a crash never leaves a
// half-written report at the target path. Failures raise IoError.
void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content);

}  // namespace apstruct
