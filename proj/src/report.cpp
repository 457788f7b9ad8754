#include "hcn/report.hpp"

#include "hcn/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace hcn {

using nlohmann::json;

Format parse_format(const std::string& text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  if (text == "markdown" || text == "md") return Format::Markdown;
  throw InvalidParameter("unknown format '" + text + "' (expected json, csv or markdown)");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double value, int significant) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0; // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, value);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

namespace {

// JSON cannot hold infinities; they are written as null with a flag.
json number(double v) { return std::isfinite(v) ? json(v == 0.0 ? 0.0 : v) : json(nullptr); }

json header(const RunInfo& info) {
  return {{"schema_version", kReportSchemaVersion},
          {"tool", "hcn"},
          {"command", info.command},
          {"manifold", info.manifold},
          {"seed", info.seed},
          {"samples", info.samples},
          {"timestamp", info.timestamp}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string vec_text(const Vec& u) {
  std::string s;
  for (int i = 0; i < u.size(); ++i) s += (i ? "," : "") + format_number(u[i], 17);
  return s;
}

} // namespace

json to_json(const VerifyReport& report, const RunInfo& info) {
  json j = header(info);
  j["dim"] = report.dim;
  j["passed"] = report.passed();
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"violation", number(c.violation)},
                      {"violation_finite", std::isfinite(c.violation)},
                      {"tolerance", c.tolerance},
                      {"comparisons", c.comparisons},
                      {"note", c.note}});
  }
  j["checks"] = checks;
  json obs = json::object();
  for (const auto& [k, v] : report.observations) obs[k] = number(v);
  j["observations"] = obs;
  j["warnings"] = report.warnings;
  return j;
}

json to_json(const SectionalTable& table, const HSphereParams& params, const Vec& u,
             const RunInfo& info) {
  json j = header(info);
  j["params"] = {{"n", params.n}, {"a", params.a}, {"b", params.b},
                 {"nu", params.nu()}, {"nu_star", params.nu_star()}};
  j["u"] = std::vector<double>(u.data(), u.data() + u.size());
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"plane", r.plane},
                    {"types", r.types},
                    {"holomorphic_alpha", r.holomorphic_alpha},
                    {"null", r.null_plane},
                    {"k_hat", r.null_plane ? json(nullptr) : number(r.k_hat)},
                    {"expected", r.expected ? number(*r.expected) : json(nullptr)},
                    {"abs_deviation", number(r.deviation())}});
  }
  j["rows"] = rows;
  j["max_deviation"] = number(table.max_deviation());
  return j;
}

json to_json(const Classification& c, const RunInfo& info) {
  json j = header(info);
  json flags = json::array();
  for (const auto& f : c.flags) {
    flags.push_back({{"name", f.name}, {"value", f.value}, {"magnitude", number(f.magnitude)}});
  }
  j["flags"] = flags;
  j["labels"] = c.labels;
  j["zero_section"] = c.zero_section;
  return j;
}

std::string render(const VerifyReport& report, const RunInfo& info, Format format) {
  if (format == Format::Json) return dump(to_json(report, info));
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "check,passed,violation,tolerance,comparisons,note\n";
    for (const auto& c : report.checks) {
      out << c.name << ',' << (c.passed ? "true" : "false") << ',' << format_number(c.violation, 17) << ','
          << format_number(c.tolerance) << ',' << c.comparisons << ',' << csv_field(c.note) << '\n';
    }
    return out.str();
  }
  out << "# Verification of " << info.manifold << "\n\n";
  out << "seed " << info.seed << ", " << info.samples << " sample points, result **"
      << (report.passed() ? "PASS" : "FAIL") << "**\n\n";
  out << "| check | result | max violation | tolerance | comparisons |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& c : report.checks) {
    out << "| " << c.name << " | " << (c.passed ? "pass" : "FAIL") << " | " << format_number(c.violation, 3)
        << " | " << format_number(c.tolerance, 3) << " | " << c.comparisons << " |\n";
  }
  if (!report.observations.empty()) {
    out << "\n| observation | value |\n|---|---|\n";
    for (const auto& [k, v] : report.observations) out << "| " << k << " | " << format_number(v, 3) << " |\n";
  }
  if (!report.warnings.empty()) {
    out << "\nWarnings:\n\n";
    for (const auto& w : report.warnings) out << "- " << w << "\n";
  }
  return out.str();
}

std::string render(const SectionalTable& table, const HSphereParams& params, const Vec& u,
                   const RunInfo& info, Format format) {
  if (format == Format::Json) return dump(to_json(table, params, u, info));
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "plane,types,k_hat,expected,abs_deviation\n";
    for (const auto& r : table.rows) {
      out << csv_field(r.plane) << ',' << csv_field(r.types) << ','
          << (r.null_plane ? "null" : format_number(r.k_hat, 17)) << ','
          << (r.expected ? format_number(*r.expected, 17) : "") << ',' << format_number(r.deviation(), 17)
          << '\n';
    }
    return out.str();
  }
  out << "# Sectional curvatures of TM over the h-sphere S(n=" << params.n << "; a=" << format_number(params.a)
      << ", b=" << format_number(params.b) << ")\n\n";
  out << "nu = a/(a^2+b^2) = " << format_number(params.nu(), 12) << ", nu* = " << format_number(params.nu_star(), 12)
      << ", u = (" << vec_text(u) << ")\n\n";
  out << "| plane | type | k^ | expected | abs dev |\n|---|---|---|---|---|\n";
  for (const auto& r : table.rows) {
    const std::string type = r.holomorphic_alpha ? "J" + std::to_string(r.holomorphic_alpha) + "-holomorphic"
                                                 : "totally real";
    out << "| " << r.plane << " | " << type << " | " << (r.null_plane ? "null" : format_number(r.k_hat, 12))
        << " | " << (r.expected ? format_number(*r.expected, 12) : "") << " | " << format_number(r.deviation(), 3)
        << " |\n";
  }
  out << "\nmax deviation " << format_number(table.max_deviation(), 3) << "\n";
  return out.str();
}

std::string render(const Classification& c, const RunInfo& info, Format format) {
  if (format == Format::Json) return dump(to_json(c, info));
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "flag,value,magnitude\n";
    for (const auto& f : c.flags) {
      out << f.name << ',' << (f.value ? "true" : "false") << ',' << format_number(f.magnitude, 17) << '\n';
    }
    return out.str();
  }
  out << "# Classification of TM over " << info.manifold << "\n\n";
  out << "| flag | value | max magnitude |\n|---|---|---|\n";
  for (const auto& f : c.flags) {
    out << "| " << f.name << " | " << (f.value ? "yes" : "no") << " | " << format_number(f.magnitude, 3) << " |\n";
  }
  out << "\nLabels:\n\n";
  for (const auto& l : c.labels) out << "- " << l << "\n";
  return out.str();
}

} // namespace hcn
