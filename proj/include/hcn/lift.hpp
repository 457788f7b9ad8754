#pragma once

// Closed-form almost hypercomplex Hermitian-Norden structure on TM at a
// point (p, u). A tangent vector to TM at u is stored as X^H + Y^V with the
// horizontal distribution of the Levi-Civita connection of g.
//
//   J1 : X^H -> -(JX)^H,  X^V -> (JX)^V
//   J2 : X^H -> X^V,      X^V -> -X^H
//   J3 : X^H -> (JX)^V,   X^V -> (JX)^H
//   g^(X^H, Y^V) = g(X, Y),  g^(H,H) = g^(V,V) = 0   (complete lift)

#include "hcn/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace hcn {

enum class Lift { H, V };

struct LiftVector {
  Vec h; ///< horizontal part X (meaning X^H)
  Vec v; ///< vertical part Y (meaning Y^V)

  static LiftVector zero(int dim) { return {Vec::Zero(dim), Vec::Zero(dim)}; }
  static LiftVector horizontal(const Vec& x) { return {x, Vec::Zero(x.size())}; }
  static LiftVector vertical(const Vec& y) { return {Vec::Zero(y.size()), y}; }
  static LiftVector lift(Lift type, const Vec& x) {
    return type == Lift::H ? horizontal(x) : vertical(x);
  }
  const Vec& part(Lift type) const { return type == Lift::H ? h : v; }

  LiftVector& operator+=(const LiftVector& o) {
    h += o.h;
    v += o.v;
    return *this;
  }
  friend LiftVector operator+(LiftVector a, const LiftVector& b) { return a += b; }
  friend LiftVector operator-(const LiftVector& a, const LiftVector& b) {
    return {a.h - b.h, a.v - b.v};
  }
  friend LiftVector operator*(double s, const LiftVector& a) { return {s * a.h, s * a.v}; }
  double max_abs() const { return std::max(hcn::max_abs(h), hcn::max_abs(v)); }
};

struct TangentBundlePoint {
  PointGeometry geom;
  Vec u; ///< fibre coordinate, u in T_pM

  TangentBundlePoint(PointGeometry g, Vec fibre);
  int base_dim() const { return geom.dim; }
  bool zero_section() const { return u.isZero(0.0); }
};

/// Affine vector field on the base chart: Y(x) = value + jacobian (x - p).
struct AffineField {
  Vec value;
  Mat jacobian;
};

/// alpha in {1,2,3}.
LiftVector apply_J(int alpha, const LiftVector& w, const TangentBundlePoint& tbp);

/// Complete-lift metric g^.
double ghat(const LiftVector& w1, const LiftVector& w2, const TangentBundlePoint& tbp);
/// Derived forms: kind 0 = g^, 1 = Phi^ = g^(J1.,.), 2 = g^(J2.,.), 3 = g^(J3.,.).
double derived_metric(int kind, const LiftVector& w1, const LiftVector& w2,
                      const TangentBundlePoint& tbp);

/// Nijenhuis tensor N_alpha on lifted arguments (closed form).
LiftVector nijenhuis_lift(int alpha, Lift t1, const Vec& X, Lift t2, const Vec& Y,
                          const TangentBundlePoint& tbp);
LiftVector nijenhuis_lift(int alpha, const LiftVector& w1, const LiftVector& w2,
                          const TangentBundlePoint& tbp);

/// Structure tensor F_alpha(x,y,z) = g^((nabla^_x J_alpha) y, z) (closed form).
double f_lift(int alpha, Lift t1, const Vec& X, Lift t2, const Vec& Y, Lift t3, const Vec& Z,
              const TangentBundlePoint& tbp);
double f_lift(int alpha, const LiftVector& w1, const LiftVector& w2, const LiftVector& w3,
              const TangentBundlePoint& tbp);

/// Levi-Civita connection of g^ on lifts of affine base fields.
LiftVector nabla_hat(Lift t1, const Vec& X, Lift t2, const AffineField& Y,
                     const TangentBundlePoint& tbp);
/// Lie bracket of lifts of affine base fields.
LiftVector bracket_hat(Lift t1, const AffineField& X, Lift t2, const AffineField& Y,
                       const TangentBundlePoint& tbp);

/// Curvature R^(w1,w2)w3 of g^ (closed form).
LiftVector curvature_hat(Lift t1, const Vec& X, Lift t2, const Vec& Y, Lift t3, const Vec& Z,
                         const TangentBundlePoint& tbp);
LiftVector curvature_hat(const LiftVector& w1, const LiftVector& w2, const LiftVector& w3,
                         const TangentBundlePoint& tbp);
double curvature_hat4(const LiftVector& w1, const LiftVector& w2, const LiftVector& w3,
                      const LiftVector& w4, const TangentBundlePoint& tbp);
/// Ricci tensor of g^: rho^(Y^H, Z^H) = 2 rho(Y, Z), all other parts zero.
double ricci_hat(const LiftVector& w1, const LiftVector& w2, const TangentBundlePoint& tbp);

/// Lee form theta_alpha (closed form).
double lee_forms_hat(int alpha, Lift type, const Vec& Z, const TangentBundlePoint& tbp);
double lee_forms_hat(int alpha, const LiftVector& w, const TangentBundlePoint& tbp);
/// theta_alpha(w) = g^{AB} F_alpha(e_A, e_B, w) traced over the lifted
/// coordinate frame {d_i^H, d_i^V} with f_lift.
double lee_form_trace(int alpha, const LiftVector& w, const TangentBundlePoint& tbp);

/// Adapted H-basis {xi_i, xi_ibar, eta_i, eta_ibar}, each block of size n,
/// built from an orthonormal J-basis {e_i, e_ibar = J e_i} of T_pM:
/// xi = (e^H + e^V)/sqrt2, eta = (e^H - e^V)/sqrt2.
struct AdaptedFrame {
  int n = 0;
  Mat base_basis; ///< columns e_1..e_n, e_1bar..e_nbar
  std::vector<LiftVector> vectors;

  const LiftVector& xi(int i) const { return vectors[static_cast<std::size_t>(i)]; }
  const LiftVector& xi_bar(int i) const { return vectors[static_cast<std::size_t>(n + i)]; }
  const LiftVector& eta(int i) const { return vectors[static_cast<std::size_t>(2 * n + i)]; }
  const LiftVector& eta_bar(int i) const { return vectors[static_cast<std::size_t>(3 * n + i)]; }
  /// Display name of frame vector k, e.g. "xi_1", "eta_2bar".
  std::string name(int k) const;
};

AdaptedFrame adapted_frame(const TangentBundlePoint& tbp);

/// Sectional curvature of g^ on span{w1, w2}; throws SingularityError for a
/// null plane.
double sectional_curvature_hat(const LiftVector& w1, const LiftVector& w2,
                               const TangentBundlePoint& tbp, double null_tolerance = 1e-12);

struct Flag {
  std::string name;
  bool value = false;
  double magnitude = 0.0; ///< max |component| behind the flag
};

struct Classification {
  std::vector<Flag> flags;
  std::vector<std::string> labels;
  bool zero_section = false;

  const Flag* find(const std::string& name) const;
  bool flag(const std::string& name) const;
  bool has_label(const std::string& label) const;
};

/// Evaluate the computable flags (N_alpha = 0, F_alpha = 0, theta_alpha = 0,
/// base flat / J parallel / Ricci-flat, ...) over all points, and the labels
/// those flags imply.
Classification classify(const std::vector<TangentBundlePoint>& points, double tolerance = 1e-10);

} // namespace hcn
