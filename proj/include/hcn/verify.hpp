#pragma once

// Verification suite run by `hcn verify`: structure validation, algebraic
// identities of the lifted structure, oracle comparisons and table checks.

#include "hcn/geometry.hpp"
#include "hcn/hsphere.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hcn {

struct CheckResult {
  std::string name;
  bool passed = false;
  double violation = 0.0; ///< max deviation; relative for oracle.* checks except scalar_hat
  double tolerance = 0.0;
  std::size_t comparisons = 0;
  std::string note;
};

struct VerifyOptions {
  int samples = 20;
  std::uint64_t seed = 42;
  double p_range = 1.0;
  std::map<std::string, double> tolerance_overrides;
  /// Set for the built-in h-sphere; the chart is then its osculating chart.
  std::optional<HSphereParams> hsphere;
};

struct VerifyReport {
  std::string manifold;
  int dim = 0;
  std::vector<CheckResult> checks; ///< sorted by name
  std::map<std::string, double> observations;
  std::vector<std::string> warnings;

  bool passed() const;
};

/// Default tolerance for every check name the suite can emit.
const std::map<std::string, double>& default_tolerances();

/// Smallest tolerance accepted as an override.
inline constexpr double kToleranceFloor = 1e-14;

/// Throws InvalidParameter for an unknown check name, a value below the
/// floor, or a value tighter than the default.
void validate_tolerance_overrides(const std::map<std::string, double>& overrides);

VerifyReport run_verify(const ChartManifold& m, const VerifyOptions& options);

} // namespace hcn
