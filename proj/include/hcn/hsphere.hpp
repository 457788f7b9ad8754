#pragma once

// Curvature-like tensors, sectional curvatures and plane types on the base,
// and sectional-curvature tables of TM over the adapted H-basis.

#include "hcn/lift.hpp"
#include "hcn/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcn {

struct HSphereParams {
  int n = 2;
  double a = 1.0, b = 0.0;

  double nu() const { return a / (a * a + b * b); }
  double nu_star() const { return -b / (a * a + b * b); }
};

/// pi1(x,y,z,w) = g(y,z)g(x,w) - g(x,z)g(y,w)
/// pi2           same with g~
/// pi3(x,y,z,w) = -g(y,z)g~(x,w) + g(x,z)g~(y,w) - g~(y,z)g(x,w) + g~(x,z)g(y,w)
double pi_tensor(int which, const Mat& g, const Mat& g_tilde, const Vec& x, const Vec& y,
                 const Vec& z, const Vec& w);
Tensor pi_tensor(int which, const Mat& g, const Mat& g_tilde);

/// nu (pi1 - pi2) + nu* pi3
Tensor hsphere_curvature(const Mat& g, const Mat& g_tilde, double nu, double nu_star);

/// k = R(x,y,y,x) / pi1(x,y,y,x). Throws SingularityError("null plane")
/// if |pi1(x,y,y,x)| < null_tolerance.
double sectional_curvature(const Tensor& R, const Mat& g, const Vec& x, const Vec& y,
                           double null_tolerance = 1e-12);
/// k* = R*(x,y,y,x) / pi1(x,y,y,x) with R*(x,y,z,w) = R(x,y,z,Jw).
double sectional_curvature_star(const Tensor& R, const Mat& g, const Mat& J, const Vec& x,
                                const Vec& y, double null_tolerance = 1e-12);

enum class PlaneType { Holomorphic, TotallyReal, Generic };
const char* to_string(PlaneType t);

PlaneType classify_plane(const Vec& x, const Vec& y, const Mat& J, const Mat& g,
                         double tolerance = 1e-9);

enum class PlaneFamily {
  // J_alpha-totally-real for all alpha (i != j)
  XiXi, XiXiBar, XiEta, XiEtaBar, XiBarXiBar, XiBarEta, XiBarEtaBar, EtaEta, EtaEtaBar,
  EtaBarEtaBar,
  // J1-holomorphic
  XiBarEta_Same, EtaBarXi_Same,
  // J2-holomorphic
  EtaXi_Same, EtaBarXiBar_Same,
  // J3-holomorphic
  XiXiBar_Same, EtaBarEta_Same,
};

struct TableRow {
  PlaneFamily family;
  std::string plane;         ///< e.g. "{xi_1,eta_2bar}"
  std::string types;         ///< e.g. "J1-holomorphic,J2-totally-real,J3-totally-real"
  int holomorphic_alpha = 0; ///< 0 if totally real for every J_alpha
  int i = 0, j = 0;
  bool null_plane = false;
  double k_hat = 0.0;
  std::optional<double> expected; ///< closed value when known
  double deviation() const;
};

struct SectionalTable {
  std::vector<TableRow> rows;
  double max_deviation() const;
};

/// k^ for every basic plane of the adapted H-basis. If `hsphere` is set,
/// rows carry the closed values +nu (xi-xi families), -nu (eta-eta
/// families) and 0 (mixed and holomorphic).
SectionalTable tm_sectional_table(const TangentBundlePoint& tbp,
                                  std::optional<HSphereParams> hsphere = std::nullopt);

/// Base sectional curvature of the J-basis plane {e_i, e_j} etc. where the
/// arguments index columns of the J-basis.
double base_basis_sectional(const TangentBundlePoint& tbp, const Mat& basis, int a, int b);

} // namespace hcn
