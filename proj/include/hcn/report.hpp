#pragma once

// Serialization of the command-line reports. JSON follows a versioned
// schema; CSV and markdown are flat renderings of the same data.

#include "hcn/hsphere.hpp"
#include "hcn/lift.hpp"
#include "hcn/verify.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace hcn {

inline constexpr const char* kReportSchemaVersion = "1.0";

enum class Format { Json, Csv, Markdown };

/// Parses "json", "csv" or "markdown"; throws InvalidParameter otherwise.
Format parse_format(const std::string& text);

/// Shared header fields of every report.
struct RunInfo {
  std::string command;  ///< "verify", "table hsphere-tm", "table classify", "describe"
  std::string manifold;
  std::uint64_t seed = 42;
  int samples = 0;
  std::string timestamp; ///< ISO 8601 UTC; the only non-deterministic field
};

/// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

/// Fixed-precision rendering with -0 printed as 0 and non-finite values as
/// "inf" / "nan".
std::string format_number(double value, int significant = 6);

nlohmann::json to_json(const VerifyReport& report, const RunInfo& info);
nlohmann::json to_json(const SectionalTable& table, const HSphereParams& params, const Vec& u,
                       const RunInfo& info);
nlohmann::json to_json(const Classification& c, const RunInfo& info);

std::string render(const VerifyReport& report, const RunInfo& info, Format format);
std::string render(const SectionalTable& table, const HSphereParams& params, const Vec& u,
                   const RunInfo& info, Format format);
std::string render(const Classification& c, const RunInfo& info, Format format);

} // namespace hcn
