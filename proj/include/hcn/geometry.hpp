#pragma once

// Base almost Norden manifold (M, J, g, g~ = g(., J.)): chart and pointwise
// models and every tensor evaluated at a point.
//
// Conventions (coordinates x^1..x^m, m = 2n, 0-based in code):
//   J d_j = J(i, j) d_i                      (column j is the image of d_j)
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   R(x,y,z,w) = g(R(x,y)z, w),   R*(x,y,z,w) = R(x,y,z,Jw)
//   rho(y,z) = g^ij R(e_i,y,z,e_j),  rho*(y,z) = g^ij R*(e_i,y,z,e_j)
//   F(x,y,z) = g((nabla_x J)y, z),   theta(z) = g^ij F(e_i,e_j,z)
//   N(X,Y) = [X,Y] + J[JX,Y] + J[X,JY] - [JX,JY]
// With these, sectional curvature k = R(x,y,y,x) / (g(x,x)g(y,y) - g(x,y)^2)
// is positive on round spheres.

#include "hcn/expr.hpp"
#include "hcn/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcn {

/// Square matrix of expressions, row-major.
class ExprMatrix {
public:
  ExprMatrix() = default;
  explicit ExprMatrix(int dim) : dim_(dim), entries_(static_cast<std::size_t>(dim * dim)) {}

  int dim() const noexcept { return dim_; }
  Expr& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
  const Expr& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * dim_ + j)];
  }

  Mat evaluate(std::span<const double> point) const;

private:
  int dim_ = 0;
  std::vector<Expr> entries_;
};

/// A single-chart manifold: metric g_ij(x) and endomorphism J^i_j(x) given
/// as expressions in the chart coordinates.
struct ChartManifold {
  std::string name;
  int dim = 0;
  ExprMatrix g;
  ExprMatrix J;
  std::vector<std::vector<double>> samples;
};

/// Checks a chart's pointwise requirements: even dimension >= 4, symmetric
/// nondegenerate g of signature (n,n), J^2 = -id, g(J.,J.) = -g.
struct StructureCheck {
  std::string name;
  std::vector<double> point;
  bool passed = false;
  double violation = 0.0;
  std::string detail;
};

struct StructureReport {
  std::vector<StructureCheck> checks;
  bool passed() const;
};

StructureReport validate_structure(const ChartManifold& m,
                                   const std::vector<std::vector<double>>& samples,
                                   double tolerance = 1e-10);

/// All base tensors at one point. Index conventions:
///   Gamma(k,i,j)      = Gamma^k_ij
///   Rup(l,i,j,k)      = component l of R(d_i,d_j)d_k
///   R(i,j,k,l)        = R(d_i,d_j,d_k,d_l)
///   nablaR(d,i,j,k,l) = (nabla_{d_d} R)(d_i,d_j,d_k,d_l)
///   nablaJ(i,k,j)     = component k of (nabla_{d_i} J) d_j
///   F(i,j,k)          = F(d_i,d_j,d_k)
///   N(k,i,j)          = component k of N(d_i,d_j)
struct PointGeometry {
  int dim = 0;
  Vec p;
  Mat g, g_inv, g_tilde, J;
  Tensor Gamma, Rup, R, nablaR, nablaJ, F, N;
  Mat rho, rho_star;
  double tau = 0.0, tau_star = 0.0;
  Vec theta;
  bool has_nablaR = false;

  int n() const { return dim / 2; }

  double metric(const Vec& x, const Vec& y) const { return x.dot(g * y); }
  Vec apply_J(const Vec& x) const { return J * x; }
  /// R(X,Y)Z
  Vec curvature(const Vec& X, const Vec& Y, const Vec& Z) const;
  double curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
  /// (nabla_U R)(X,Y)Z; zero vector if nabla R was not computed.
  Vec nabla_curvature(const Vec& U, const Vec& X, const Vec& Y, const Vec& Z) const;
  /// (nabla_X J) Y
  Vec nabla_J(const Vec& X, const Vec& Y) const;
  double structure(const Vec& x, const Vec& y, const Vec& z) const;
  Vec nijenhuis(const Vec& X, const Vec& Y) const;
  /// nabla_X Y for an affine coordinate field Y(x) = Y0 + DY (x - p).
  Vec covariant(const Vec& X, const Vec& Y0, const Mat& DY) const;
  double ricci(const Vec& y, const Vec& z) const { return y.dot(rho * z); }
  double ricci_star(const Vec& y, const Vec& z) const { return y.dot(rho_star * z); }
  double lee(const Vec& z) const { return theta.dot(z); }
};

struct GeometryOptions {
  /// Jet order used for the metric; 3 gives nabla R, 2 stops at R.
  int jet_order = 3;
};

/// Evaluate all base tensors at p. Throws SingularityError for a singular
/// metric and StructuralError if jet_order < 2.
PointGeometry point_geometry(const ChartManifold& m, std::span<const double> p,
                             const GeometryOptions& options = {});

/// Fill every derived quantity (g_inv, g~, Rup, rho, rho*, tau, tau*,
/// theta, nabla J from F, N from nabla J) from g, J, R, nablaR, F.
void complete_from_core(PointGeometry& geom);

/// Base curvature contractions; exposed for pointwise models.
Mat ricci_contraction(const Tensor& R, const Mat& g_inv);
Mat ricci_star_contraction(const Tensor& R, const Mat& g_inv, const Mat& J);

enum class ModelKind { Flat, HSphere, Custom };

struct PointwiseModel {
  int dim = 0;
  Mat g, J;
  Tensor R, nablaR, F;
  ModelKind kind = ModelKind::Custom;
  int n = 0;
  double a = 0.0, b = 0.0;
  double nu = 0.0, nu_star = 0.0;

  std::string provenance() const;
  /// View as a PointGeometry at the coordinate origin with Gamma = 0.
  PointGeometry geometry() const;
};

PointwiseModel make_flat(int n);
/// h-sphere curvature model with R = nu (pi1 - pi2) + nu* pi3, nabla R = 0,
/// F = 0. Throws InvalidParameter for (a,b) = (0,0) or n < 2.
PointwiseModel make_hsphere(int n, double a, double b);

/// Standard pointwise Norden data: g = diag(I_n, -I_n), J e_i = e_{n+i}.
Mat standard_norden_metric(int n);
Mat standard_complex_structure(int n);

/// Orthonormal J-basis {e_1..e_n, Je_1..Je_n} as matrix columns, with
/// g(e_i,e_i) = 1, g(Je_i,Je_i) = -1 and all other pairings zero.
/// Throws SingularityError if no basis can be built.
Mat orthonormal_j_basis(const Mat& g, const Mat& J, double tolerance = 1e-10);

/// Polynomial chart around the origin whose metric and curvature at 0 match
/// the model: g_ij(x) = g_ij + (1/3) R(d_i, x, x, d_j) ... see source.
/// J is constant. Used to feed pointwise models to chart-based machinery.
ChartManifold osculating_chart(const PointwiseModel& model, const std::string& name);

} // namespace hcn
