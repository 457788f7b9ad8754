#include "doctest.h"

#include "hcn/config.hpp"
#include "hcn/errors.hpp"
#include "hcn/report.hpp"
#include "hcn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace hcn;

TEST_CASE("number formatting") {
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(-1e-30, 3) == "-1e-30");
  CHECK(format_number(0.12) == "0.12");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("formats") {
  CHECK(parse_format("json") == Format::Json);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK(parse_format("markdown") == Format::Markdown);
  CHECK_THROWS_AS(parse_format("xml"), InvalidParameter);
}

TEST_CASE("tolerance overrides") {
  CHECK_NOTHROW(validate_tolerance_overrides({{"lee_forms", 1e-6}}));
  CHECK_THROWS_AS(validate_tolerance_overrides({{"lee_forms", 1e-9}}), InvalidParameter);
  CHECK_THROWS_AS(validate_tolerance_overrides({{"lee_forms", 1e-15}}), InvalidParameter);
  CHECK_THROWS_AS(validate_tolerance_overrides({{"unknown", 1.0}}), InvalidParameter);
  for (const auto& [name, value] : default_tolerances()) CHECK(value >= kToleranceFloor);
}

TEST_CASE("verify reports") {
  VerifyOptions o;
  o.samples = 4;
  const VerifyReport flat = run_verify(resolve_manifold("flat-norden-4"), o);
  CHECK(flat.passed());
  CHECK(std::is_sorted(flat.checks.begin(), flat.checks.end(),
                       [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; }));
  CHECK(flat.checks.size() == default_tolerances().size() - 1); // no h-sphere table

  const VerifyReport bad = run_verify(resolve_manifold("bad-hermitian-4"), o);
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.checks.size() == 1);
  CHECK(bad.checks[0].name == "structure");

  o.hsphere = HSphereParams{2, 3, 4};
  o.p_range = 0.3;
  const VerifyReport hs = run_verify(osculating_chart(make_hsphere(2, 3, 4), "hs"), o);
  CHECK(hs.passed());
  CHECK(hs.checks.size() == default_tolerances().size());
}

TEST_CASE("JSON schema and determinism") {
  VerifyOptions o;
  o.samples = 3;
  const auto m = resolve_manifold("conformal-norden-4");
  const RunInfo info{"verify", m.name, o.seed, o.samples, "2000-01-01T00:00:00Z"};
  const auto a = to_json(run_verify(m, o), info);
  const auto b = to_json(run_verify(m, o), info);
  CHECK(a == b);
  CHECK(a["schema_version"] == kReportSchemaVersion);
  for (const char* key : {"tool", "command", "manifold", "seed", "samples", "timestamp", "dim", "passed", "checks",
                          "observations", "warnings"}) {
    CHECK_MESSAGE(a.contains(key), key);
  }
  for (const auto& c : a["checks"]) {
    for (const char* key : {"name", "passed", "violation", "tolerance", "comparisons", "note"}) CHECK(c.contains(key));
  }
  const std::string csv = render(run_verify(m, o), info, Format::Csv);
  CHECK(csv.rfind("check,passed,violation,tolerance,comparisons,note\n", 0) == 0);
}

TEST_CASE("table and classification serialization") {
  const HSphereParams p{2, 3, 4};
  const Vec u = Vec::Unit(4, 0);
  const auto table = tm_sectional_table(TangentBundlePoint(make_hsphere(2, 3, 4).geometry(), u), p);
  const RunInfo info{"table hsphere-tm", "hsphere", 42, 1, "t"};
  const auto j = to_json(table, p, u, info);
  CHECK(j["rows"].size() == 28);
  CHECK(j["params"]["nu"].get<double>() == doctest::Approx(0.12));
  const std::string md = render(table, p, u, info, Format::Markdown);
  CHECK(md.find("| {xi_1,xi_2} | totally real | 0.12 | 0.12 |") != std::string::npos);
  CHECK(md.find("-0 ") == std::string::npos);

  const auto c = classify({TangentBundlePoint(make_flat(2).geometry(), u)});
  const auto cj = to_json(c, {"table classify", "flat", 42, 1, "t"});
  CHECK(cj["labels"].size() == c.labels.size());
  CHECK(render(c, info, Format::Csv).rfind("flag,value,magnitude\n", 0) == 0);
}
