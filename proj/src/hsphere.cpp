#include "hcn/hsphere.hpp"

#include "hcn/errors.hpp"

#include <cmath>

namespace hcn {

double pi_tensor(int which, const Mat& g, const Mat& gt, const Vec& x, const Vec& y, const Vec& z,
                 const Vec& w) {
  auto G = [&](const Vec& a, const Vec& b) { return a.dot(g * b); };
  auto T = [&](const Vec& a, const Vec& b) { return a.dot(gt * b); };
  switch (which) {
  case 1:
    return G(y, z) * G(x, w) - G(x, z) * G(y, w);
  case 2:
    return T(y, z) * T(x, w) - T(x, z) * T(y, w);
  case 3:
    return -G(y, z) * T(x, w) + G(x, z) * T(y, w) - T(y, z) * G(x, w) + T(x, z) * G(y, w);
  default:
    throw StructuralError("pi tensor index must be 1, 2 or 3");
  }
}

Tensor pi_tensor(int which, const Mat& g, const Mat& gt) {
  const int m = static_cast<int>(g.rows());
  Tensor t(m, 4);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      for (int z = 0; z < m; ++z) {
        for (int w = 0; w < m; ++w) {
          switch (which) {
          case 1:
            t(x, y, z, w) = g(y, z) * g(x, w) - g(x, z) * g(y, w);
            break;
          case 2:
            t(x, y, z, w) = gt(y, z) * gt(x, w) - gt(x, z) * gt(y, w);
            break;
          case 3:
            t(x, y, z, w) = -g(y, z) * gt(x, w) + g(x, z) * gt(y, w) - gt(y, z) * g(x, w) +
                            gt(x, z) * g(y, w);
            break;
          default:
            throw StructuralError("pi tensor index must be 1, 2 or 3");
          }
        }
      }
    }
  }
  return t;
}

Tensor hsphere_curvature(const Mat& g, const Mat& g_tilde, double nu, double nu_star) {
  Tensor p1 = pi_tensor(1, g, g_tilde);
  const Tensor p2 = pi_tensor(2, g, g_tilde);
  const Tensor p3 = pi_tensor(3, g, g_tilde);
  for (std::size_t q = 0; q < p1.size(); ++q) {
    p1.data()[q] = nu * (p1.data()[q] - p2.data()[q]) + nu_star * p3.data()[q];
  }
  return p1;
}

namespace {

double contract4(const Tensor& R, const Vec& x, const Vec& y, const Vec& z, const Vec& w) {
  const int m = R.dim();
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < m; ++j) {
      if (y[j] == 0.0) continue;
      for (int k = 0; k < m; ++k) {
        if (z[k] == 0.0) continue;
        for (int l = 0; l < m; ++l) s += R(i, j, k, l) * x[i] * y[j] * z[k] * w[l];
      }
    }
  }
  return s;
}

double plane_norm(const Mat& g, const Vec& x, const Vec& y, double null_tolerance) {
  const double c = y.dot(g * y) * x.dot(g * x) - std::pow(x.dot(g * y), 2);
  if (std::abs(c) < null_tolerance) throw SingularityError("null plane");
  return c;
}

} // namespace

double sectional_curvature(const Tensor& R, const Mat& g, const Vec& x, const Vec& y,
                           double null_tolerance) {
  const double c = plane_norm(g, x, y, null_tolerance);
  return contract4(R, x, y, y, x) / c;
}

double sectional_curvature_star(const Tensor& R, const Mat& g, const Mat& J, const Vec& x,
                                const Vec& y, double null_tolerance) {
  const double c = plane_norm(g, x, y, null_tolerance);
  return contract4(R, x, y, y, J * x) / c;
}

const char* to_string(PlaneType t) {
  switch (t) {
  case PlaneType::Holomorphic:
    return "holomorphic";
  case PlaneType::TotallyReal:
    return "totally_real";
  default:
    return "generic";
  }
}

PlaneType classify_plane(const Vec& x, const Vec& y, const Mat& J, const Mat& g,
                         double tolerance) {
  Mat span(x.size(), 2);
  span << x, y;
  Mat both(x.size(), 4);
  both << x, y, J * x, J * y;
  Eigen::JacobiSVD<Mat> svd_span(span);
  Eigen::JacobiSVD<Mat> svd_both(both);
  const double scale = std::max(1.0, svd_span.singularValues()[0]);
  auto rank = [&](const Eigen::JacobiSVD<Mat>& svd) {
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()[i] > tolerance * scale) ++r;
    }
    return r;
  };
  if (rank(svd_both) == rank(svd_span)) return PlaneType::Holomorphic;
  const double scale2 = std::max({1.0, x.squaredNorm(), y.squaredNorm()});
  bool orthogonal = true;
  for (const Vec* a : {&x, &y}) {
    for (const Vec* b : {&x, &y}) {
      if (std::abs(a->dot(g * (J * *b))) > tolerance * scale2) orthogonal = false;
    }
  }
  return orthogonal ? PlaneType::TotallyReal : PlaneType::Generic;
}

double TableRow::deviation() const {
  if (!expected || null_plane) return 0.0;
  return std::abs(k_hat - *expected);
}

double SectionalTable::max_deviation() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.deviation());
  return m;
}

namespace {

struct FamilySpec {
  PlaneFamily family;
  int block1, block2; // 0 xi, 1 xi_bar, 2 eta, 3 eta_bar
  bool same_index;    // i = j (holomorphic families)
  bool unordered;     // both members from the same block: only i < j
  int holomorphic_alpha;
  int expected_sign;  // closed value sign * nu for h-spheres
};

constexpr FamilySpec kFamilies[] = {
    {PlaneFamily::XiXi, 0, 0, false, true, 0, +1},
    {PlaneFamily::XiXiBar, 0, 1, false, false, 0, +1},
    {PlaneFamily::XiEta, 0, 2, false, false, 0, 0},
    {PlaneFamily::XiEtaBar, 0, 3, false, false, 0, 0},
    {PlaneFamily::XiBarXiBar, 1, 1, false, true, 0, +1},
    {PlaneFamily::XiBarEta, 1, 2, false, false, 0, 0},
    {PlaneFamily::XiBarEtaBar, 1, 3, false, false, 0, 0},
    {PlaneFamily::EtaEta, 2, 2, false, true, 0, -1},
    {PlaneFamily::EtaEtaBar, 2, 3, false, false, 0, -1},
    {PlaneFamily::EtaBarEtaBar, 3, 3, false, true, 0, -1},
    {PlaneFamily::XiBarEta_Same, 1, 2, true, false, 1, 0},
    {PlaneFamily::EtaBarXi_Same, 3, 0, true, false, 1, 0},
    {PlaneFamily::EtaXi_Same, 2, 0, true, false, 2, 0},
    {PlaneFamily::EtaBarXiBar_Same, 3, 1, true, false, 2, 0},
    {PlaneFamily::XiXiBar_Same, 0, 1, true, false, 3, 0},
    {PlaneFamily::EtaBarEta_Same, 3, 2, true, false, 3, 0},
};

std::string type_tags(int holomorphic_alpha) {
  std::string s;
  for (int a = 1; a <= 3; ++a) {
    if (!s.empty()) s += ',';
    s += "J" + std::to_string(a) + (a == holomorphic_alpha ? "-holomorphic" : "-totally-real");
  }
  return s;
}

} // namespace

SectionalTable tm_sectional_table(const TangentBundlePoint& tbp,
                                  std::optional<HSphereParams> hsphere) {
  const AdaptedFrame frame = adapted_frame(tbp);
  const int n = frame.n;
  SectionalTable table;
  for (const auto& spec : kFamilies) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (spec.same_index ? i != j : i == j) continue;
        if (spec.unordered && j < i) continue;
        const int k1 = spec.block1 * n + i;
        const int k2 = spec.block2 * n + j;
        TableRow row;
        row.family = spec.family;
        row.plane = "{" + frame.name(k1) + "," + frame.name(k2) + "}";
        row.types = type_tags(spec.holomorphic_alpha);
        row.holomorphic_alpha = spec.holomorphic_alpha;
        row.i = i + 1;
        row.j = j + 1;
        try {
          row.k_hat = sectional_curvature_hat(frame.vectors[static_cast<std::size_t>(k1)],
                                              frame.vectors[static_cast<std::size_t>(k2)], tbp);
        } catch (const SingularityError&) {
          row.null_plane = true;
        }
        if (hsphere) row.expected = spec.expected_sign * hsphere->nu();
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

double base_basis_sectional(const TangentBundlePoint& tbp, const Mat& basis, int a, int b) {
  return sectional_curvature(tbp.geom.R, tbp.geom.g, basis.col(a), basis.col(b));
}

} // namespace hcn
