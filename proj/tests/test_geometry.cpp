#include "doctest.h"

#include "hcn/config.hpp"
#include "hcn/errors.hpp"
#include "hcn/geometry.hpp"

#include <cmath>
#include <random>

using namespace hcn;

namespace {

// Central-difference Christoffel symbols from metric samples alone.
Tensor fd_christoffel(const ChartManifold& m, std::vector<double> p, double h = 1e-4) {
  const int d = m.dim;
  std::vector<Mat> dg(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    auto q = p;
    q[static_cast<std::size_t>(a)] += h;
    const Mat gp = m.g.evaluate(q);
    q[static_cast<std::size_t>(a)] -= 2 * h;
    dg[static_cast<std::size_t>(a)] = (gp - m.g.evaluate(q)) / (2 * h);
  }
  const Mat ginv = m.g.evaluate(p).inverse();
  Tensor G(d, 3);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) {
          s += 0.5 * ginv(k, l) *
               (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                dg[static_cast<std::size_t>(l)](i, j));
        }
        G(k, i, j) = s;
      }
    }
  }
  return G;
}

// R_ijkl from central differences of the FD Christoffel symbols.
Tensor fd_curvature(const ChartManifold& m, const std::vector<double>& p) {
  const int d = m.dim;
  const double h = 1e-3;
  std::vector<Tensor> dG;
  for (int a = 0; a < d; ++a) {
    auto q = p;
    q[static_cast<std::size_t>(a)] += h;
    Tensor plus = fd_christoffel(m, q);
    q[static_cast<std::size_t>(a)] -= 2 * h;
    Tensor minus = fd_christoffel(m, q);
    Tensor diff(d, 3);
    for (std::size_t k = 0; k < diff.size(); ++k) diff.data()[k] = (plus.data()[k] - minus.data()[k]) / (2 * h);
    dG.push_back(diff);
  }
  const Tensor G = fd_christoffel(m, p);
  const Mat g = m.g.evaluate(p);
  Tensor R(d, 4);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int q = 0; q < d; ++q) {
            double up = dG[static_cast<std::size_t>(i)](q, j, k) - dG[static_cast<std::size_t>(j)](q, i, k);
            for (int r = 0; r < d; ++r) up += G(q, i, r) * G(r, j, k) - G(q, j, r) * G(r, i, k);
            s += g(l, q) * up;
          }
          R(i, j, k, l) = s;
        }
      }
    }
  }
  return R;
}

PointGeometry at(const ChartManifold& m, std::vector<double> p, int order = 3) {
  return point_geometry(m, p, {order});
}

const StructureCheck* find_check(const StructureReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void check_curvature_symmetries(const PointGeometry& geo, double tol) {
  const int m = geo.dim;
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          const double r = geo.R(i, j, k, l);
          worst = std::max(worst, std::abs(r + geo.R(j, i, k, l)));
          worst = std::max(worst, std::abs(r + geo.R(i, j, l, k)));
          worst = std::max(worst, std::abs(r - geo.R(k, l, i, j)));
          worst = std::max(worst, std::abs(r + geo.R(j, k, i, l) + geo.R(k, i, j, l)));
        }
      }
    }
  }
  CHECK(worst < tol);
}

} // namespace

TEST_CASE("structure validation on the shipped manifolds") {
  const auto flat = resolve_manifold("flat-norden-4");
  const auto rf = validate_structure(flat, flat.samples);
  CHECK(rf.passed());
  for (const auto& c : rf.checks) CHECK(c.violation == 0.0);

  const auto conf = resolve_manifold("conformal-norden-4");
  CHECK(validate_structure(conf, conf.samples).passed());

  const auto bad = resolve_manifold("bad-hermitian-4");
  const auto rb = validate_structure(bad, bad.samples);
  CHECK_FALSE(rb.passed());
  const auto* norden = find_check(rb, "norden_compatibility");
  REQUIRE(norden != nullptr);
  CHECK_FALSE(norden->passed);
  CHECK(norden->violation == 2.0);

  for (const char* name : {"twisted-norden-4", "flat-norden-6"}) {
    const auto m = resolve_manifold(name);
    CHECK_MESSAGE(validate_structure(m, m.samples).passed(), name);
  }
}

TEST_CASE("degenerate metric is reported, not thrown") {
  const auto m = parse_manifold_config(R"cfg(name = "deg"
dim = 4
g[1][1] = "x1"
g[2][2] = "1"
g[3][3] = "-1"
g[4][4] = "-1"
J[3][1] = "1"
J[4][2] = "1"
J[1][3] = "-1"
J[2][4] = "-1"
)cfg");
  const auto r = validate_structure(m, {{0, 0, 0, 0}});
  CHECK_FALSE(r.passed());
  CHECK_FALSE(find_check(r, "metric_nondegenerate")->passed);
  CHECK_THROWS_AS(at(m, {0, 0, 0, 0}), SingularityError);
}

TEST_CASE("flat Norden space has vanishing tensors") {
  const auto m = resolve_manifold("flat-norden-4");
  const auto geo = at(m, {0.3, -0.2, 0.5, 0.1});
  CHECK(geo.Gamma.max_abs() == 0.0);
  CHECK(geo.R.max_abs() == 0.0);
  CHECK(geo.F.max_abs() == 0.0);
  CHECK(geo.N.max_abs() == 0.0);
  CHECK(max_abs(geo.theta) == 0.0);
}

TEST_CASE("conformal Christoffel symbols") {
  const auto m = resolve_manifold("conformal-norden-4");
  const auto geo = at(m, {0, 0, 0, 0});
  CHECK(geo.Gamma(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(geo.Gamma(2, 0, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(geo.Gamma(0, 2, 2) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> p{u(rng), u(rng), u(rng), u(rng)};
    const auto g = at(m, p);
    CHECK(max_abs_diff(g.Gamma, fd_christoffel(m, p)) < 1e-6 * std::exp(2 * std::abs(p[0])));
  }
}

TEST_CASE("curvature matches nested finite differences") {
  for (const char* name : {"conformal-norden-4", "twisted-norden-4"}) {
    const auto m = resolve_manifold(name);
    const std::vector<double> p{0.2, -0.1, 0.4, -0.3};
    const auto geo = at(m, p);
    CHECK_MESSAGE(max_abs_diff(geo.R, fd_curvature(m, p)) < 1e-5, name);
  }
}

TEST_CASE("round sphere has positive sectional curvature") {
  const auto m = parse_manifold_config(R"cfg(name = "s2"
dim = 2
g[1][1] = "1"
g[2][2] = "sin(x1)^2"
)cfg");
  const auto geo = at(m, {1.0, 0.3});
  const double k = geo.R(0, 1, 1, 0) / (geo.g(0, 0) * geo.g(1, 1));
  CHECK(k == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geo.tau == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("algebraic invariants on random points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const char* name : {"conformal-norden-4", "twisted-norden-4", "flat-norden-6"}) {
    const auto m = resolve_manifold(name);
    for (int t = 0; t < 5; ++t) {
      std::vector<double> p(static_cast<std::size_t>(m.dim));
      for (auto& x : p) x = u(rng);
      const auto geo = at(m, p);
      check_curvature_symmetries(geo, 1e-9);
      const int d = geo.dim;
      double fsym = 0.0, nskew = 0.0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          for (int k = 0; k < d; ++k) {
            fsym = std::max(fsym, std::abs(geo.F(i, j, k) - geo.F(i, k, j)));
            nskew = std::max(nskew, std::abs(geo.N(k, i, j) + geo.N(k, j, i)));
          }
        }
      }
      CHECK(fsym < 1e-10);
      CHECK(nskew < 1e-10);
      // Second Bianchi identity for nabla R.
      double bianchi = 0.0;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          for (int c = 0; c < d; ++c) {
            for (int k = 0; k < d; ++k) {
              for (int l = 0; l < d; ++l) {
                bianchi = std::max(bianchi, std::abs(geo.nablaR(a, b, c, k, l) + geo.nablaR(b, c, a, k, l) +
                                                     geo.nablaR(c, a, b, k, l)));
              }
            }
          }
        }
      }
      CHECK(bianchi < 1e-9);
    }
  }
}

TEST_CASE("Nijenhuis tensor from derivatives of J matches the connection form") {
  const auto m = resolve_manifold("twisted-norden-4");
  const auto geo = at(m, {0.3, -0.2, 0.5, 0.1});
  CHECK(geo.N.max_abs() > 0.1);
  PointGeometry rebuilt = geo;
  complete_from_core(rebuilt);
  CHECK(max_abs_diff(geo.N, rebuilt.N) < 1e-12);
  CHECK(max_abs_diff(geo.nablaJ, rebuilt.nablaJ) < 1e-12);

  const auto conf = resolve_manifold("conformal-norden-4");
  CHECK(at(conf, {0.1, 0.2, 0.3, 0.4}).N.max_abs() < 1e-10);
}

TEST_CASE("jet order is enforced") {
  const auto m = resolve_manifold("flat-norden-4");
  CHECK_THROWS_AS(at(m, {0, 0, 0, 0}, 1), StructuralError);
  CHECK_FALSE(at(m, {0, 0, 0, 0}, 2).has_nablaR);
  CHECK_THROWS_AS(point_geometry(m, std::vector<double>{0, 0}), StructuralError);
}

TEST_CASE("pointwise models") {
  const auto h = make_hsphere(2, 1, 0);
  CHECK(h.nu == 1.0);
  CHECK(h.nu_star == 0.0);
  const auto h34 = make_hsphere(2, 3, 4);
  CHECK(h34.nu == doctest::Approx(0.12).epsilon(1e-15));
  CHECK(h34.nu_star == doctest::Approx(-0.16).epsilon(1e-15));
  CHECK(h34.provenance() == "hsphere(2,3,4)");
  CHECK(make_flat(2).R.max_abs() == 0.0);
  CHECK_THROWS_AS(make_hsphere(2, 0, 0), InvalidParameter);
  CHECK_THROWS_AS(make_hsphere(1, 1, 0), InvalidParameter);

  const auto geo = h34.geometry();
  check_curvature_symmetries(geo, 1e-14);
  CHECK(geo.tau == doctest::Approx(0.96).epsilon(1e-13));
}

TEST_CASE("h-sphere Ricci tensors") {
  for (int n : {2, 3}) {
    for (auto [a, b] : {std::pair{3.0, 4.0}, std::pair{1.0, 0.0}, std::pair{-0.5, 2.0}}) {
      const auto model = make_hsphere(n, a, b);
      const auto geo = model.geometry();
      const double nu = model.nu, ns = model.nu_star;
      const Mat rho = 2.0 * (n - 1) * (nu * geo.g - ns * geo.g_tilde);
      const Mat rho_star = 2.0 * (n - 1) * (nu * geo.g_tilde + ns * geo.g);
      CHECK(max_abs(geo.rho - rho) < 1e-12);
      CHECK(max_abs(geo.rho_star - rho_star) < 1e-12);
      CHECK(geo.tau == doctest::Approx(4.0 * n * (n - 1) * nu).epsilon(1e-12));
      CHECK(geo.tau_star == doctest::Approx(4.0 * n * (n - 1) * ns).epsilon(1e-12));
    }
  }
}

TEST_CASE("orthonormal J-basis") {
  const auto conf = resolve_manifold("twisted-norden-4");
  const auto geo = at(conf, {0.3, -0.2, 0.5, 0.1});
  const Mat E = orthonormal_j_basis(geo.g, geo.J);
  const Mat gram = E.transpose() * geo.g * E;
  Mat expected = standard_norden_metric(2);
  CHECK(max_abs(gram - expected) < 1e-10);
  CHECK(max_abs(E.rightCols(2) - geo.J * E.leftCols(2)) < 1e-12);
  CHECK_THROWS_AS(orthonormal_j_basis(Mat::Zero(4, 4), geo.J), SingularityError);
}

TEST_CASE("osculating chart reproduces the model curvature") {
  const auto model = make_hsphere(2, 3, 4);
  const auto chart = osculating_chart(model, "osc");
  const auto geo = at(chart, {0, 0, 0, 0});
  CHECK(max_abs_diff(geo.R, model.R) < 1e-14);
  CHECK(max_abs(geo.g - model.g) == 0.0);
  CHECK(geo.Gamma.max_abs() < 1e-15);
}
