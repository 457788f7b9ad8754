#include "doctest.h"

#include "hcn/errors.hpp"
#include "hcn/hsphere.hpp"
#include "support/bases.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace hcn;

namespace {

Vec e(int dim, int i) { return Vec::Unit(dim, i); }

Vec stacked(const LiftVector& w) {
  Vec out(2 * w.h.size());
  out << w.h, w.v;
  return out;
}

LiftVector unstacked(const Vec& c) {
  const auto m = c.size() / 2;
  return {c.head(m), c.tail(m)};
}

// 2m x 2m matrices of J_alpha and g^ acting on stacked (h, v) components.
Mat lifted_J(int alpha, const TangentBundlePoint& tbp) {
  const int m2 = 2 * tbp.base_dim();
  Mat out(m2, m2);
  for (int c = 0; c < m2; ++c) out.col(c) = stacked(apply_J(alpha, unstacked(Vec::Unit(m2, c)), tbp));
  return out;
}

Mat lifted_g(const TangentBundlePoint& tbp) {
  const int m2 = 2 * tbp.base_dim();
  Mat out(m2, m2);
  for (int r = 0; r < m2; ++r) {
    for (int c = 0; c < m2; ++c) out(r, c) = ghat(unstacked(Vec::Unit(m2, r)), unstacked(Vec::Unit(m2, c)), tbp);
  }
  return out;
}

std::string tag(PlaneType t) { return t == PlaneType::Holomorphic ? "holomorphic" : "totally-real"; }

} // namespace

TEST_CASE("curvature-like tensors") {
  const auto model = make_hsphere(2, 1, 0);
  const Mat& g = model.g;
  const Mat gt = g * model.J;
  CHECK(pi_tensor(1, g, gt, e(4, 0), e(4, 1), e(4, 1), e(4, 0)) == 1.0);
  CHECK(pi_tensor(2, g, gt, e(4, 0), e(4, 1), e(4, 1), e(4, 0)) == 0.0);
  testing::LiftSampler s(1);
  for (int k = 0; k < 20; ++k) {
    const Vec x = s.vec(4), z = s.vec(4), w = s.vec(4), y = s.vec(4);
    for (int which = 1; which <= 3; ++which) {
      CHECK(std::abs(pi_tensor(which, g, gt, x, x, z, w)) <= 1e-14);
      CHECK(std::abs(pi_tensor(which, g, gt, x, y, z, w) + pi_tensor(which, g, gt, x, y, w, z)) <= 1e-13);
      CHECK(std::abs(pi_tensor(which, g, gt, x, y, z, w) - pi_tensor(which, g, gt, z, w, x, y)) <= 1e-13);
    }
  }
  const Tensor p3 = pi_tensor(3, g, gt);
  CHECK(p3(0, 1, 1, 0) == doctest::Approx(pi_tensor(3, g, gt, e(4, 0), e(4, 1), e(4, 1), e(4, 0))));
}

TEST_CASE("h-sphere curvature is assembled from the pi tensors") {
  for (auto [n, a, b] : {std::tuple{2, 3.0, 4.0}, std::tuple{3, 1.0, -2.0}}) {
    const auto model = make_hsphere(n, a, b);
    const HSphereParams params{n, a, b};
    const Tensor R = hsphere_curvature(model.g, model.g * model.J, params.nu(), params.nu_star());
    double worst = 0.0;
    for (std::size_t k = 0; k < R.size(); ++k) worst = std::max(worst, std::abs(R.data()[k] - model.R.data()[k]));
    CHECK(worst <= 1e-15);
    const Mat rho = ricci_contraction(R, model.g.inverse());
    const Mat gt = model.g * model.J;
    CHECK(max_abs(rho - 2.0 * (n - 1) * (params.nu() * model.g - params.nu_star() * gt)) <= 1e-12);
    CHECK(std::abs((model.g.inverse() * rho).trace() - 4.0 * n * (n - 1) * params.nu()) <= 1e-12);
  }
  const HSphereParams p{2, 3, 4};
  CHECK(p.nu() == doctest::Approx(0.12).epsilon(1e-15));
  CHECK(p.nu_star() == doctest::Approx(-0.16).epsilon(1e-15));
}

TEST_CASE("base sectional curvatures") {
  const auto h = make_hsphere(2, 1, 0);
  CHECK(sectional_curvature(h.R, h.g, e(4, 0), e(4, 1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(sectional_curvature(h.R, h.g, e(4, 0), h.J * e(4, 0))) <= 1e-14);

  const auto h34 = make_hsphere(2, 3, 4);
  CHECK(sectional_curvature(h34.R, h34.g, e(4, 0), e(4, 1)) == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(sectional_curvature_star(h34.R, h34.g, h34.J, e(4, 0), e(4, 1)) == doctest::Approx(-0.16).epsilon(1e-14));
  CHECK(std::abs(sectional_curvature(h34.R, h34.g, e(4, 1), h34.J * e(4, 1))) <= 1e-14);
  CHECK(std::abs(sectional_curvature_star(h34.R, h34.g, h34.J, e(4, 0), h34.J * e(4, 0))) <= 1e-14);

  const auto flat = make_flat(2);
  testing::LiftSampler s(2);
  for (int k = 0; k < 10; ++k) CHECK(sectional_curvature(flat.R, flat.g, s.vec(4), s.vec(4)) == 0.0);

  // e1 + e3 is null for diag(1,1,-1,-1).
  CHECK_THROWS_AS(sectional_curvature(h.R, h.g, e(4, 0) + e(4, 2), e(4, 1) + e(4, 3)), SingularityError);
  try {
    sectional_curvature(h.R, h.g, e(4, 0) + e(4, 2), e(4, 1) + e(4, 3));
  } catch (const SingularityError& err) {
    CHECK(std::string(err.what()).find("null plane") != std::string::npos);
  }
}

TEST_CASE("sectional curvature does not depend on the plane basis") {
  const auto model = make_hsphere(2, 3, 4);
  // The conformal chart gives a curvature tensor without the h-sphere's special form.
  const auto conf = testing::chart_points(resolve_manifold("conformal-norden-4"), 1, 3).front().geom;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  testing::LiftSampler s(5);
  int checked = 0;
  for (int k = 0; k < 50; ++k) {
    const Vec x = s.vec(4), y = s.vec(4);
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (std::abs(a * d - b * c) < 0.1) continue;
    const Vec x2 = a * x + b * y, y2 = c * x + d * y;
    const double k1 = sectional_curvature(conf.R, conf.g, x, y);
    const double k2 = sectional_curvature(conf.R, conf.g, x2, y2);
    CHECK(std::abs(k1 - k2) <= 1e-9 * std::max(1.0, std::abs(k1)));
    const double m1 = sectional_curvature(model.R, model.g, x, y);
    CHECK(std::abs(m1 - sectional_curvature(model.R, model.g, x2, y2)) <= 1e-9 * std::max(1.0, std::abs(m1)));
    // R* is curvature-like only on a Kaehler-Norden base, so k* is checked there.
    const double s1 = sectional_curvature_star(model.R, model.g, model.J, x, y);
    const double s2 = sectional_curvature_star(model.R, model.g, model.J, x2, y2);
    CHECK(std::abs(s1 - s2) <= 1e-9 * std::max(1.0, std::abs(s1)));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("plane classification") {
  const Mat g = standard_norden_metric(2), J = standard_complex_structure(2);
  CHECK(classify_plane(e(4, 0), J * e(4, 0), J, g) == PlaneType::Holomorphic);
  CHECK(classify_plane(e(4, 0), e(4, 1), J, g) == PlaneType::TotallyReal);
  const Vec mixed = (e(4, 1) + J * e(4, 0)).normalized();
  CHECK(classify_plane(e(4, 0), mixed, J, g) == PlaneType::Generic);
  CHECK(std::string(to_string(PlaneType::TotallyReal)) == "totally_real");
}

TEST_CASE("TM sectional table on the h-sphere") {
  const TangentBundlePoint tbp(make_hsphere(2, 3, 4).geometry(), Vec::Unit(4, 0));
  const auto table = tm_sectional_table(tbp, HSphereParams{2, 3, 4});
  CHECK(table.rows.size() == 28);
  CHECK(table.max_deviation() <= 1e-12);
  std::map<std::string, double> by_plane;
  for (const auto& r : table.rows) {
    CHECK_FALSE(r.null_plane);
    REQUIRE(r.expected.has_value());
    by_plane[r.plane] = r.k_hat;
    if (r.holomorphic_alpha != 0) CHECK(std::abs(r.k_hat) <= 1e-12);
    const double k = r.k_hat;
    CHECK((std::abs(k - 0.12) <= 1e-12 || std::abs(k + 0.12) <= 1e-12 || std::abs(k) <= 1e-12));
  }
  CHECK(by_plane.at("{xi_1,xi_2}") == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(by_plane.at("{eta_1,eta_2}") == doctest::Approx(-0.12).epsilon(1e-12));
  CHECK(std::abs(by_plane.at("{xi_1,eta_2}")) <= 1e-12);

  // Other parameters and n = 3, at a random fibre point.
  testing::LiftSampler s(6);
  const TangentBundlePoint t3(make_hsphere(3, 1, -2).geometry(), s.vec(6));
  const auto table3 = tm_sectional_table(t3, HSphereParams{3, 1, -2});
  CHECK(table3.rows.size() > 28);
  CHECK(table3.max_deviation() <= 1e-12);
}

TEST_CASE("type tags agree with direct plane classification") {
  testing::LiftSampler s(7);
  for (const auto& tbp : {TangentBundlePoint(make_hsphere(2, 3, 4).geometry(), s.vec(4)),
                          testing::chart_points(resolve_manifold("conformal-norden-4"), 1, 8).front()}) {
    const auto table = tm_sectional_table(tbp);
    const AdaptedFrame frame = adapted_frame(tbp);
    std::map<std::string, int> index;
    for (int k = 0; k < static_cast<int>(frame.vectors.size()); ++k) index[frame.name(k)] = k;
    const Mat G = lifted_g(tbp);
    for (const auto& row : table.rows) {
      const auto comma = row.plane.find(',');
      const std::string a = row.plane.substr(1, comma - 1);
      const std::string b = row.plane.substr(comma + 1, row.plane.size() - comma - 2);
      const Vec x = stacked(frame.vectors[index.at(a)]), y = stacked(frame.vectors[index.at(b)]);
      std::string tags;
      for (int alpha = 1; alpha <= 3; ++alpha) {
        if (alpha > 1) tags += ",";
        const PlaneType t = classify_plane(x, y, lifted_J(alpha, tbp), G);
        REQUIRE(t != PlaneType::Generic);
        tags += "J" + std::to_string(alpha) + "-" + tag(t);
      }
      CHECK_MESSAGE(tags == row.types, row.plane);
    }
  }
}

TEST_CASE("holomorphic planes of TM on a general base") {
  for (const auto& tbp : testing::chart_points(resolve_manifold("conformal-norden-4"), 5, 9)) {
    const AdaptedFrame f = adapted_frame(tbp);
    for (int i = 0; i < f.n; ++i) {
      CHECK(std::abs(sectional_curvature_hat(f.eta(i), f.xi(i), tbp)) <= 1e-8);
      CHECK(std::abs(sectional_curvature_hat(f.eta_bar(i), f.xi_bar(i), tbp)) <= 1e-8);
      const double a = sectional_curvature_hat(f.xi_bar(i), f.eta(i), tbp);
      const double b = sectional_curvature_hat(f.eta_bar(i), f.xi(i), tbp);
      CHECK(std::abs(a - b) <= 1e-8);
    }
  }
}

TEST_CASE("k-hat combination identities") {
  std::vector<TangentBundlePoint> points = testing::chart_points(resolve_manifold("conformal-norden-4"), 5, 10);
  for (auto& p : testing::chart_points(resolve_manifold("twisted-norden-4"), 3, 10)) points.push_back(p);
  testing::LiftSampler s(11);
  points.emplace_back(make_hsphere(2, 3, 4).geometry(), s.vec(4));
  double worst = 0.0, scale = 0.0;
  for (const auto& tbp : points) {
    const AdaptedFrame f = adapted_frame(tbp);
    const int m = 2 * f.n;
    // xi_a and eta_a for a over the whole J-basis {e_1..e_n, e_1bar..e_nbar}.
    auto xi = [&](int a) { return f.vectors[static_cast<std::size_t>(a)]; };
    auto eta = [&](int a) { return f.vectors[static_cast<std::size_t>(m + a)]; };
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const double kxx = sectional_curvature_hat(xi(i), xi(j), tbp);
        const double kee = sectional_curvature_hat(eta(i), eta(j), tbp);
        const double kxe = sectional_curvature_hat(xi(i), eta(j), tbp);
        const double kij = base_basis_sectional(tbp, f.base_basis, i, j);
        worst = std::max(worst, std::abs(kxx + kee + 2 * kxe));
        worst = std::max(worst, std::abs(kxx - kee - 2 * kij));
        scale = std::max(scale, std::abs(kxe));
      }
    }
  }
  CHECK(worst <= 1e-8);
  CHECK(scale > 1e-3);
}
