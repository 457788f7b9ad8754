#include "doctest.h"

#include "hcn/config.hpp"
#include "hcn/errors.hpp"
#include "hcn/oracle.hpp"

#include <cmath>
#include <random>

using namespace hcn;

namespace {

std::set<std::string> all_quantities() {
  return {oracle_quantities().begin(), oracle_quantities().end()};
}

std::vector<double> concat(const Vec& p, const Vec& u) {
  std::vector<double> out(p.data(), p.data() + p.size());
  out.insert(out.end(), u.data(), u.data() + u.size());
  return out;
}

} // namespace

TEST_CASE("induced chart of the flat Norden space") {
  const auto tm = build_tm_chart(resolve_manifold("flat-norden-4"));
  CHECK(tm.chart.dim == 8);
  const Vec p = Vec::Constant(4, 0.3), u = Vec::Constant(4, -0.7);
  const Mat g = tm.chart.g.evaluate(concat(p, u));
  Vec d(4);
  d << 1, 1, -1, -1;
  CHECK(max_abs(g.topLeftCorner(4, 4)) == 0.0);
  CHECK(max_abs(g.bottomRightCorner(4, 4)) == 0.0);
  CHECK(max_abs(g.topRightCorner(4, 4) - Mat(d.asDiagonal())) == 0.0);
  CHECK(max_abs(g.bottomLeftCorner(4, 4) - Mat(d.asDiagonal())) == 0.0);
}

TEST_CASE("induced chart of the conformal Norden space") {
  const auto base = resolve_manifold("conformal-norden-4");
  const auto tm = build_tm_chart(base);
  for (const auto& s : random_tm_samples(4, 10, 3)) {
    const auto pt = concat(s.p, s.u);
    const Mat g = tm.chart.g.evaluate(pt);
    CHECK(g(0, 0) == doctest::Approx(2 * s.u[0] * std::exp(2 * s.p[0])).epsilon(1e-13));
    // Spot check y^k d_k g_ij against first-order jets of the base metric.
    std::vector<Jet> env;
    for (int i = 0; i < 4; ++i) env.push_back(Jet::variable(4, 1, i, s.p[i]));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const Jet gij = evaluate(base.g(i, j), env);
        double expected = 0.0;
        for (int k = 0; k < 4; ++k) expected += s.u[k] * gij.d(k);
        CHECK(std::abs(g(i, j) - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("lifted metric in coordinates reproduces the complete lift") {
  for (const char* name : {"conformal-norden-4", "twisted-norden-4"}) {
    const auto tm = build_tm_chart(resolve_manifold(name));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto vec = [&] {
      Vec v(4);
      for (int i = 0; i < 4; ++i) v[i] = unit(rng);
      return v;
    };
    double worst = 0.0, j_worst = 0.0;
    for (const auto& s : random_tm_samples(4, 10, 4)) {
      const auto pt = concat(s.p, s.u);
      const Mat gh = tm.chart.g.evaluate(pt);
      const Mat gb = tm.base.g.evaluate(std::vector<double>(s.p.data(), s.p.data() + 4));
      const Mat G = tm.connection_block(s.p, s.u);
      const Vec X = vec(), Y = vec();
      const Vec xh = to_coordinates(LiftVector::horizontal(X), G);
      const Vec yh = to_coordinates(LiftVector::horizontal(Y), G);
      const Vec yv = to_coordinates(LiftVector::vertical(Y), G);
      const Vec xv = to_coordinates(LiftVector::vertical(X), G);
      worst = std::max(worst, std::abs(xh.dot(gh * yv) - X.dot(gb * Y)));
      worst = std::max(worst, std::abs(xh.dot(gh * yh)));
      worst = std::max(worst, std::abs(xv.dot(gh * yv)));
      const LiftVector w{X, Y};
      worst = std::max(worst, (from_coordinates(to_coordinates(w, G), G) - w).max_abs());
      for (int a = 0; a < 3; ++a) {
        const Mat J = tm.J[static_cast<std::size_t>(a)].evaluate(pt);
        j_worst = std::max(j_worst, max_abs(J * J + Mat::Identity(8, 8)));
      }
    }
    CHECK_MESSAGE(worst <= 1e-10, name);
    CHECK_MESSAGE(j_worst <= 1e-12, name);
  }
}

TEST_CASE("oracle agrees exactly on the flat base") {
  const auto tm = build_tm_chart(resolve_manifold("flat-norden-4"));
  const auto report = oracle_compare(tm, random_tm_samples(4, 5, 42), all_quantities());
  CHECK(report.points_used == 5);
  CHECK(report.warnings.empty());
  for (const auto& q : report.quantities) {
    CHECK_MESSAGE(q.max_abs <= 1e-12, q.name);
    CHECK_MESSAGE(q.comparisons > 0, q.name);
  }
  CHECK(report.einstein_residual <= 1e-12);
  CHECK(report.base_ricci <= 1e-12);
}

TEST_CASE("oracle agrees with the closed forms on curved bases") {
  for (const char* name : {"conformal-norden-4", "twisted-norden-4"}) {
    const auto tm = build_tm_chart(resolve_manifold(name));
    const auto report = oracle_compare(tm, random_tm_samples(4, 20, 42), all_quantities());
    CHECK(report.points_used == 20);
    REQUIRE(report.quantities.size() == oracle_quantities().size());
    for (const auto& q : report.quantities) {
      CHECK_MESSAGE(q.max_rel < 1e-7, name, " ", q.name);
      if (q.name != "scalar_hat") CHECK_MESSAGE(q.scale > 1e-3, name, " ", q.name);
    }
    CHECK(std::abs(report.find("scalar_hat")->max_abs) < 1e-7);
    CHECK(report.unlisted_curvature <= 1e-7);
    CHECK(report.unlisted_ricci <= 1e-7);
    // The base is not Ricci-flat, so TM is not Einstein.
    CHECK(report.base_ricci > 1e-3);
    CHECK(report.einstein_residual > 1e-3);
  }
}

TEST_CASE("scalar flatness on an osculating h-sphere chart") {
  const auto tm = build_tm_chart(osculating_chart(make_hsphere(2, 3, 4), "hsphere-osc"));
  const auto report = oracle_compare(tm, random_tm_samples(4, 10, 7, 0.3), {"scalar_hat", "R_hat", "ricci_hat"});
  CHECK(report.points_used == 10);
  CHECK(std::abs(report.find("scalar_hat")->max_abs) < 1e-7);
  CHECK(report.find("R_hat")->max_rel < 1e-7);
  CHECK(report.find("ricci_hat")->max_rel < 1e-7);
}

TEST_CASE("oracle errors and skipped points") {
  const auto tm = build_tm_chart(resolve_manifold("flat-norden-4"));
  CHECK_THROWS_AS(oracle_compare(tm, random_tm_samples(4, 1, 1), {"bogus"}), StructuralError);

  const auto log_base = parse_manifold_config(R"cfg(name = "log"
dim = 4
g[1][1] = "ln(x1)"
g[2][2] = "1"
g[3][3] = "-ln(x1)"
g[4][4] = "-1"
J[3][1] = "1"
J[4][2] = "1"
J[1][3] = "-1"
J[2][4] = "-1"
)cfg");
  const auto tm_log = build_tm_chart(log_base);
  std::vector<TMSample> pts{{Vec::Constant(4, -0.5), Vec::Constant(4, 0.5)},
                            {Vec::Constant(4, 2.0), Vec::Constant(4, 0.5)}};
  const auto report = oracle_compare(tm_log, pts, {"R_hat"});
  CHECK(report.points_used == 1);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("point 0 skipped") != std::string::npos);
}

TEST_CASE("sampling is deterministic and respects the exclusion ball") {
  const auto a = random_tm_samples(4, 50, 9), b = random_tm_samples(4, 50, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p == b[i].p);
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].u.norm() >= 0.1);
    CHECK(a[i].p.cwiseAbs().maxCoeff() <= 1.0);
  }
}
