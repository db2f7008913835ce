#pragma once

namespace multiform {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "1";

}  // namespace multiform
