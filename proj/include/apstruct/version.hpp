#pragma once

namespace apstruct {

inline constexpr const char* kVersionString = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace apstruct
