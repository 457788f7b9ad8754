#include "hcn/lift.hpp"

#include "hcn/errors.hpp"

#include <cmath>

namespace hcn {

namespace {

void check_alpha(int alpha) {
  if (alpha < 1 || alpha > 3) throw InvalidParameter("alpha must be 1, 2 or 3");
}

void check_vec(const Vec& x, int dim) {
  if (x.size() != dim) throw StructuralError("vector length does not match base dimension");
}

} // namespace

TangentBundlePoint::TangentBundlePoint(PointGeometry g, Vec fibre)
    : geom(std::move(g)), u(std::move(fibre)) {
  if (u.size() != geom.dim) throw StructuralError("fibre vector u must have length dim(M)");
}

LiftVector apply_J(int alpha, const LiftVector& w, const TangentBundlePoint& tbp) {
  check_alpha(alpha);
  const Mat& J = tbp.geom.J;
  switch (alpha) {
  case 1:
    return {-(J * w.h), J * w.v};
  case 2:
    return {-w.v, w.h};
  default:
    return {J * w.v, J * w.h};
  }
}

double ghat(const LiftVector& w1, const LiftVector& w2, const TangentBundlePoint& tbp) {
  const auto& geo = tbp.geom;
  return geo.metric(w1.h, w2.v) + geo.metric(w1.v, w2.h);
}

double derived_metric(int kind, const LiftVector& w1, const LiftVector& w2,
                      const TangentBundlePoint& tbp) {
  if (kind == 0) return ghat(w1, w2, tbp);
  return ghat(apply_J(kind, w1, tbp), w2, tbp);
}

// ---------------------------------------------------------------------------
// Nijenhuis tensors

LiftVector nijenhuis_lift(int alpha, Lift t1, const Vec& X, Lift t2, const Vec& Y,
                          const TangentBundlePoint& tbp) {
  check_alpha(alpha);
  const auto& geo = tbp.geom;
  const int m = geo.dim;
  check_vec(X, m);
  check_vec(Y, m);
  const Mat& J = geo.J;
  const Vec& u = tbp.u;
  auto Ru = [&](const Vec& a, const Vec& b) { return geo.curvature(a, b, u); };
  auto DJ = [&](const Vec& a, const Vec& b) { return geo.nabla_J(a, b); };
  const Vec JX = J * X, JY = J * Y;

  LiftVector out = LiftVector::zero(m);
  const bool hh = t1 == Lift::H && t2 == Lift::H;
  const bool hv = t1 == Lift::H && t2 == Lift::V;
  const bool vh = t1 == Lift::V && t2 == Lift::H;

  switch (alpha) {
  case 1:
    if (hh) {
      out.h = geo.nijenhuis(X, Y);
      out.v = Ru(JX, JY) + J * Ru(JX, Y) + J * Ru(X, JY) - Ru(X, Y);
    } else if (hv) {
      out.v = DJ(JX, Y) - DJ(X, JY);
    } else if (vh) {
      out.v = DJ(Y, JX) - DJ(JY, X);
    }
    break;
  case 2:
    if (hh) {
      out.v = -Ru(X, Y);
    } else if (hv || vh) {
      out.h = -Ru(X, Y);
    } else {
      out.v = Ru(X, Y);
    }
    break;
  default:
    if (hh) {
      out.h = J * DJ(X, Y) - J * DJ(Y, X);
      out.v = -Ru(X, Y);
    } else if (hv) {
      out.v = J * DJ(X, Y) + DJ(JY, X);
      out.h = -(J * Ru(X, JY));
    } else if (vh) {
      out.v = -(DJ(JX, Y) + J * DJ(Y, X));
      out.h = -(J * Ru(JX, Y));
    } else {
      out.h = -(DJ(JX, Y) - DJ(JY, X));
      out.v = Ru(JX, JY);
    }
    break;
  }
  return out;
}

LiftVector nijenhuis_lift(int alpha, const LiftVector& w1, const LiftVector& w2,
                          const TangentBundlePoint& tbp) {
  LiftVector out = LiftVector::zero(tbp.base_dim());
  for (Lift a : {Lift::H, Lift::V}) {
    for (Lift b : {Lift::H, Lift::V}) {
      out += nijenhuis_lift(alpha, a, w1.part(a), b, w2.part(b), tbp);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure tensors

double f_lift(int alpha, Lift t1, const Vec& X, Lift t2, const Vec& Y, Lift t3, const Vec& Z,
              const TangentBundlePoint& tbp) {
  check_alpha(alpha);
  // nabla^_{X^V} annihilates lifts, so every component with a vertical
  // first argument vanishes.
  if (t1 == Lift::V) return 0.0;
  const auto& geo = tbp.geom;
  const Mat& J = geo.J;
  const Vec& u = tbp.u;
  auto R = [&](const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    return geo.curvature4(a, b, c, d);
  };
  const bool H2 = t2 == Lift::H, H3 = t3 == Lift::H;

  switch (alpha) {
  case 1:
    if (H2 && H3) return -R(u, X, J * Y, Z) - R(u, X, Y, J * Z);
    if (H2 && !H3) return -geo.structure(X, Y, Z);
    if (!H2 && H3) return geo.structure(X, Y, Z);
    return 0.0;
  case 2:
    if (H2 && !H3) return R(u, X, Y, Z);
    if (!H2 && H3) return -R(u, X, Y, Z);
    return 0.0;
  default:
    if (H2 && H3) return geo.structure(X, Y, Z);
    if (!H2 && !H3) return geo.structure(X, Y, Z);
    if (H2 && !H3) return -R(u, X, Y, J * Z);
    return R(u, X, J * Y, Z);
  }
}

double f_lift(int alpha, const LiftVector& w1, const LiftVector& w2, const LiftVector& w3,
              const TangentBundlePoint& tbp) {
  double s = 0.0;
  for (Lift a : {Lift::H, Lift::V}) {
    for (Lift b : {Lift::H, Lift::V}) {
      for (Lift c : {Lift::H, Lift::V}) {
        s += f_lift(alpha, a, w1.part(a), b, w2.part(b), c, w3.part(c), tbp);
      }
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Connection and brackets

LiftVector nabla_hat(Lift t1, const Vec& X, Lift t2, const AffineField& Y,
                     const TangentBundlePoint& tbp) {
  const auto& geo = tbp.geom;
  LiftVector out = LiftVector::zero(geo.dim);
  if (t1 == Lift::V) return out;
  const Vec nXY = geo.covariant(X, Y.value, Y.jacobian);
  if (t2 == Lift::H) {
    out.h = nXY;
    out.v = geo.curvature(tbp.u, X, Y.value);
  } else {
    out.v = nXY;
  }
  return out;
}

LiftVector bracket_hat(Lift t1, const AffineField& X, Lift t2, const AffineField& Y,
                       const TangentBundlePoint& tbp) {
  const auto& geo = tbp.geom;
  LiftVector out = LiftVector::zero(geo.dim);
  if (t1 == Lift::H && t2 == Lift::H) {
    out.h = Y.jacobian * X.value - X.jacobian * Y.value;
    out.v = -geo.curvature(X.value, Y.value, tbp.u);
  } else if (t1 == Lift::H && t2 == Lift::V) {
    out.v = geo.covariant(X.value, Y.value, Y.jacobian);
  } else if (t1 == Lift::V && t2 == Lift::H) {
    out.v = -geo.covariant(Y.value, X.value, X.jacobian);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curvature

LiftVector curvature_hat(Lift t1, const Vec& X, Lift t2, const Vec& Y, Lift t3, const Vec& Z,
                         const TangentBundlePoint& tbp) {
  const auto& geo = tbp.geom;
  LiftVector out = LiftVector::zero(geo.dim);
  const int vertical = (t1 == Lift::V) + (t2 == Lift::V) + (t3 == Lift::V);
  if (vertical == 0) {
    out.h = geo.curvature(X, Y, Z);
    out.v = geo.nabla_curvature(tbp.u, X, Y, Z);
  } else if (vertical == 1) {
    out.v = geo.curvature(X, Y, Z);
  }
  return out;
}

LiftVector curvature_hat(const LiftVector& w1, const LiftVector& w2, const LiftVector& w3,
                         const TangentBundlePoint& tbp) {
  LiftVector out = LiftVector::zero(tbp.base_dim());
  for (Lift a : {Lift::H, Lift::V}) {
    for (Lift b : {Lift::H, Lift::V}) {
      for (Lift c : {Lift::H, Lift::V}) {
        out += curvature_hat(a, w1.part(a), b, w2.part(b), c, w3.part(c), tbp);
      }
    }
  }
  return out;
}

double curvature_hat4(const LiftVector& w1, const LiftVector& w2, const LiftVector& w3,
                      const LiftVector& w4, const TangentBundlePoint& tbp) {
  return ghat(curvature_hat(w1, w2, w3, tbp), w4, tbp);
}

double ricci_hat(const LiftVector& w1, const LiftVector& w2, const TangentBundlePoint& tbp) {
  return 2.0 * tbp.geom.ricci(w1.h, w2.h);
}

// ---------------------------------------------------------------------------
// Lee forms

double lee_forms_hat(int alpha, Lift type, const Vec& Z, const TangentBundlePoint& tbp) {
  check_alpha(alpha);
  const auto& geo = tbp.geom;
  if (type == Lift::H) {
    switch (alpha) {
    case 1:
      return geo.lee(Z);
    case 2:
      return -geo.ricci(tbp.u, Z);
    default:
      return geo.ricci_star(tbp.u, Z);
    }
  }
  return alpha == 3 ? geo.lee(Z) : 0.0;
}

double lee_forms_hat(int alpha, const LiftVector& w, const TangentBundlePoint& tbp) {
  return lee_forms_hat(alpha, Lift::H, w.h, tbp) + lee_forms_hat(alpha, Lift::V, w.v, tbp);
}

double lee_form_trace(int alpha, const LiftVector& w, const TangentBundlePoint& tbp) {
  const auto& geo = tbp.geom;
  const int m = geo.dim;
  // Frame {d_1^H..d_m^H, d_1^V..d_m^V}; g^ = [[0, g], [g, 0]] and its
  // inverse is [[0, g^-1], [g^-1, 0]].
  std::vector<LiftVector> frame;
  for (int i = 0; i < m; ++i) frame.push_back(LiftVector::horizontal(Vec::Unit(m, i)));
  for (int i = 0; i < m; ++i) frame.push_back(LiftVector::vertical(Vec::Unit(m, i)));
  Mat G(2 * m, 2 * m);
  for (int A = 0; A < 2 * m; ++A) {
    for (int B = 0; B < 2 * m; ++B) G(A, B) = ghat(frame[A], frame[B], tbp);
  }
  const Mat Ginv = G.inverse();
  double s = 0.0;
  for (int A = 0; A < 2 * m; ++A) {
    for (int B = 0; B < 2 * m; ++B) {
      if (Ginv(A, B) == 0.0) continue;
      s += Ginv(A, B) * f_lift(alpha, frame[A], frame[B], w, tbp);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Adapted frame

std::string AdaptedFrame::name(int k) const {
  const int block = k / n;
  const int idx = k % n + 1;
  static const char* stems[4] = {"xi_", "xi_", "eta_", "eta_"};
  std::string s = stems[block] + std::to_string(idx);
  if (block == 1 || block == 3) s += "bar";
  return s;
}

AdaptedFrame adapted_frame(const TangentBundlePoint& tbp) {
  const auto& geo = tbp.geom;
  AdaptedFrame frame;
  frame.n = geo.n();
  frame.base_basis = orthonormal_j_basis(geo.g, geo.J);
  const double s = 1.0 / std::sqrt(2.0);
  const int m = geo.dim;
  frame.vectors.resize(static_cast<std::size_t>(2 * m));
  for (int k = 0; k < m; ++k) {
    const Vec e = frame.base_basis.col(k);
    frame.vectors[static_cast<std::size_t>(k)] = {s * e, s * e};
    frame.vectors[static_cast<std::size_t>(m + k)] = {s * e, -s * e};
  }
  return frame;
}

double sectional_curvature_hat(const LiftVector& w1, const LiftVector& w2,
                               const TangentBundlePoint& tbp, double null_tolerance) {
  const double denom = ghat(w2, w2, tbp) * ghat(w1, w1, tbp) - std::pow(ghat(w1, w2, tbp), 2);
  if (std::abs(denom) < null_tolerance) throw SingularityError("null plane");
  return curvature_hat4(w1, w2, w2, w1, tbp) / denom;
}

// ---------------------------------------------------------------------------
// Classification

const Flag* Classification::find(const std::string& name) const {
  for (const auto& f : flags) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

bool Classification::flag(const std::string& name) const {
  const Flag* f = find(name);
  if (!f) throw StructuralError("unknown classification flag '" + name + "'");
  return f->value;
}

bool Classification::has_label(const std::string& label) const {
  for (const auto& l : labels) {
    if (l == label) return true;
  }
  return false;
}

Classification classify(const std::vector<TangentBundlePoint>& points, double tolerance) {
  if (points.empty()) throw StructuralError("classification needs at least one point");
  double n_max[3] = {0, 0, 0}, f_max[3] = {0, 0, 0}, theta_max[3] = {0, 0, 0};
  double base_R = 0, base_nablaJ = 0, base_rho = 0, base_theta = 0, base_rho_star = 0;
  double base_N = 0;
  bool zero_section = false;

  for (const auto& tbp : points) {
    const auto& geo = tbp.geom;
    const int m = geo.dim;
    zero_section = zero_section || tbp.zero_section();
    std::vector<std::pair<Lift, Vec>> basis;
    for (Lift t : {Lift::H, Lift::V}) {
      for (int i = 0; i < m; ++i) basis.emplace_back(t, Vec::Unit(m, i));
    }
    for (int alpha = 1; alpha <= 3; ++alpha) {
      const int a = alpha - 1;
      for (const auto& [t1, X] : basis) {
        for (const auto& [t2, Y] : basis) {
          n_max[a] = std::max(n_max[a], nijenhuis_lift(alpha, t1, X, t2, Y, tbp).max_abs());
          for (const auto& [t3, Z] : basis) {
            f_max[a] = std::max(f_max[a], std::abs(f_lift(alpha, t1, X, t2, Y, t3, Z, tbp)));
          }
        }
        theta_max[a] = std::max(theta_max[a], std::abs(lee_forms_hat(alpha, t1, X, tbp)));
      }
    }
    base_R = std::max(base_R, geo.R.max_abs());
    base_nablaJ = std::max(base_nablaJ, geo.nablaJ.max_abs());
    base_rho = std::max(base_rho, max_abs(geo.rho));
    base_rho_star = std::max(base_rho_star, max_abs(geo.rho_star));
    base_theta = std::max(base_theta, max_abs(geo.theta));
    base_N = std::max(base_N, geo.N.max_abs());
  }

  Classification c;
  c.zero_section = zero_section;
  auto add = [&](const std::string& name, double mag) {
    c.flags.push_back({name, mag <= tolerance, mag});
  };
  for (int a = 0; a < 3; ++a) add("N" + std::to_string(a + 1) + "_zero", n_max[a]);
  for (int a = 0; a < 3; ++a) add("F" + std::to_string(a + 1) + "_zero", f_max[a]);
  for (int a = 0; a < 3; ++a) add("theta" + std::to_string(a + 1) + "_zero", theta_max[a]);
  add("base_flat", base_R);
  add("base_J_parallel", base_nablaJ);
  add("base_ricci_flat", base_rho);
  add("base_ricci_star_zero", base_rho_star);
  add("base_theta_zero", base_theta);
  add("base_N_zero", base_N);

  const int vanishing_n = c.flag("N1_zero") + c.flag("N2_zero") + c.flag("N3_zero");
  if (vanishing_n >= 2) c.labels.push_back("hypercomplex");
  else c.labels.push_back("not hypercomplex");
  for (int a = 1; a <= 3; ++a) {
    if (c.flag("N" + std::to_string(a) + "_zero")) c.labels.push_back("complex J" + std::to_string(a));
    if (c.flag("F" + std::to_string(a) + "_zero")) c.labels.push_back("parallel J" + std::to_string(a));
  }
  if (c.flag("F1_zero") && c.flag("F2_zero") && c.flag("F3_zero")) {
    c.labels.push_back("pseudo-hyper-Kaehler");
  }
  if (c.flag("theta1_zero")) c.labels.push_back("semi-Kaehler w.r.t. J1");
  if (c.flag("theta2_zero")) c.labels.push_back("W2+W3 w.r.t. J2");
  if (c.flag("theta3_zero")) c.labels.push_back("W2+W3 w.r.t. J3");
  if (zero_section) c.labels.push_back("zero-section point");
  return c;
}

} // namespace hcn
