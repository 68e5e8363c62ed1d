#pragma once

#include <string_view>

namespace bqcs {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "bqcs-report-v1";

}  // namespace bqcs
