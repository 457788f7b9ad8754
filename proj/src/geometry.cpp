#include "hcn/geometry.hpp"

#include "hcn/errors.hpp"
#include "hcn/hsphere.hpp"

#include <cmath>
#include <sstream>

namespace hcn {

Mat ExprMatrix::evaluate(std::span<const double> point) const {
  Mat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = hcn::evaluate((*this)(i, j), point);
  }
  return m;
}

bool StructureReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

StructureReport validate_structure(const ChartManifold& m,
                                   const std::vector<std::vector<double>>& samples,
                                   double tolerance) {
  StructureReport report;
  auto add = [&](std::string name, const std::vector<double>& p, bool ok, double v,
                 std::string detail = {}) {
    report.checks.push_back({std::move(name), p, ok, v, std::move(detail)});
  };

  const bool dim_ok = m.dim >= 4 && m.dim % 2 == 0 && m.g.dim() == m.dim && m.J.dim() == m.dim;
  add("dimension", {}, dim_ok, dim_ok ? 0.0 : 1.0,
      "dim = " + std::to_string(m.dim) + " (must be even and >= 4)");
  if (!dim_ok) return report;

  const int n = m.dim / 2;
  for (const auto& p : samples) {
    if (static_cast<int>(p.size()) != m.dim) {
      add("sample", p, false, 1.0, "sample point has wrong length");
      continue;
    }
    Mat g, J;
    try {
      g = m.g.evaluate(p);
      J = m.J.evaluate(p);
    } catch (const std::exception& e) {
      add("evaluate", p, false, 1.0, e.what());
      continue;
    }
    const double sym = max_abs(g - g.transpose());
    add("metric_symmetric", p, sym <= tolerance, sym);

    Mat gs = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(gs);
    const Vec& ev = eig.eigenvalues();
    const double smallest = ev.cwiseAbs().minCoeff();
    const bool nondegenerate = smallest > tolerance;
    add("metric_nondegenerate", p, nondegenerate, nondegenerate ? 0.0 : smallest,
        nondegenerate ? std::string{} : "degenerate metric");
    int positive = 0, negative = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] > tolerance) ++positive;
      if (ev[i] < -tolerance) ++negative;
    }
    const bool neutral = positive == n && negative == n;
    add("metric_signature", p, neutral, neutral ? 0.0 : std::abs(positive - n) + std::abs(negative - n),
        "signature (" + std::to_string(positive) + "," + std::to_string(negative) + ")");

    const double jsq = max_abs(J * J + Mat::Identity(m.dim, m.dim));
    add("complex_structure", p, jsq <= tolerance, jsq);

    const double norden = max_abs(J.transpose() * g * J + g);
    add("norden_compatibility", p, norden <= tolerance, norden);
  }
  return report;
}

// ---------------------------------------------------------------------------
// PointGeometry accessors

Vec PointGeometry::curvature(const Vec& X, const Vec& Y, const Vec& Z) const {
  Vec out = Vec::Zero(dim);
  for (int l = 0; l < dim; ++l) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      if (X[i] == 0.0) continue;
      for (int j = 0; j < dim; ++j) {
        if (Y[j] == 0.0) continue;
        for (int k = 0; k < dim; ++k) s += Rup(l, i, j, k) * X[i] * Y[j] * Z[k];
      }
    }
    out[l] = s;
  }
  return out;
}

double PointGeometry::curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  return metric(curvature(x, y, z), w);
}

Vec PointGeometry::nabla_curvature(const Vec& U, const Vec& X, const Vec& Y, const Vec& Z) const {
  Vec lowered = Vec::Zero(dim);
  if (!has_nablaR) return lowered;
  for (int d = 0; d < dim; ++d) {
    if (U[d] == 0.0) continue;
    for (int i = 0; i < dim; ++i) {
      if (X[i] == 0.0) continue;
      for (int j = 0; j < dim; ++j) {
        if (Y[j] == 0.0) continue;
        for (int k = 0; k < dim; ++k) {
          const double c = U[d] * X[i] * Y[j] * Z[k];
          if (c == 0.0) continue;
          for (int l = 0; l < dim; ++l) lowered[l] += nablaR(d, i, j, k, l) * c;
        }
      }
    }
  }
  return g_inv * lowered;
}

Vec PointGeometry::nabla_J(const Vec& X, const Vec& Y) const {
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (X[i] == 0.0) continue;
    for (int k = 0; k < dim; ++k) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) s += nablaJ(i, k, j) * Y[j];
      out[k] += X[i] * s;
    }
  }
  return out;
}

double PointGeometry::structure(const Vec& x, const Vec& y, const Vec& z) const {
  return metric(nabla_J(x, y), z);
}

Vec PointGeometry::nijenhuis(const Vec& X, const Vec& Y) const {
  Vec out = Vec::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) s += N(k, i, j) * X[i] * Y[j];
    }
    out[k] = s;
  }
  return out;
}

Vec PointGeometry::covariant(const Vec& X, const Vec& Y0, const Mat& DY) const {
  Vec out = DY * X;
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) out[k] += Gamma(k, i, j) * X[i] * Y0[j];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contractions

Mat ricci_contraction(const Tensor& R, const Mat& g_inv) {
  const int m = R.dim();
  Mat rho = Mat::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) s += g_inv(i, j) * R(i, a, b, j);
      }
      rho(a, b) = s;
    }
  }
  return rho;
}

Mat ricci_star_contraction(const Tensor& R, const Mat& g_inv, const Mat& J) {
  const int m = R.dim();
  Mat rho = Mat::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (g_inv(i, j) == 0.0) continue;
          double rj = 0.0; // R(e_i, a, b, J e_j)
          for (int l = 0; l < m; ++l) rj += R(i, a, b, l) * J(l, j);
          s += g_inv(i, j) * rj;
        }
      }
      rho(a, b) = s;
    }
  }
  return rho;
}

namespace {

double det_or_throw(const Mat& g) {
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw SingularityError("singular metric");
  return lu.determinant();
}

Mat checked_inverse(const Mat& g) {
  det_or_throw(g);
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (g + g.transpose()));
  if (eig.eigenvalues().cwiseAbs().minCoeff() < 1e-12 * std::max(1.0, max_abs(g))) {
    throw SingularityError("singular metric");
  }
  return g.inverse();
}

/// Gauss-Jordan inverse of a jet matrix, partial pivoting on constant terms.
std::vector<std::vector<Jet>> jet_inverse(std::vector<std::vector<Jet>> a) {
  const int m = static_cast<int>(a.size());
  std::vector<std::vector<Jet>> inv(m, std::vector<Jet>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) inv[i][j] = Jet::constant_like(a[0][0], i == j ? 1.0 : 0.0);
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col].value()) > std::abs(a[pivot][col].value())) pivot = r;
    }
    if (std::abs(a[pivot][col].value()) < 1e-300) throw SingularityError("singular metric");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Jet r = reciprocal(a[col][col]);
    for (int j = 0; j < m; ++j) {
      a[col][j] = a[col][j] * r;
      inv[col][j] = inv[col][j] * r;
    }
    for (int row = 0; row < m; ++row) {
      if (row == col) continue;
      const Jet f = a[row][col];
      bool zero = true;
      for (double c : f.coeffs()) zero = zero && c == 0.0;
      if (zero) continue;
      for (int j = 0; j < m; ++j) {
        a[row][j] -= f * a[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

bool is_zero(const Jet& j) {
  for (double c : j.coeffs()) {
    if (c != 0.0) return false;
  }
  return true;
}

/// Nijenhuis tensor from nabla J (torsion-free connection):
/// N(X,Y) = -( (nabla_JX J)Y - (nabla_JY J)X - J(nabla_X J)Y + J(nabla_Y J)X ).
Tensor nijenhuis_from_nablaJ(const PointGeometry& geo) {
  const int m = geo.dim;
  Tensor N(m, 3);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Vec X = Vec::Unit(m, i), Y = Vec::Unit(m, j);
      Vec v = geo.nabla_J(geo.J * X, Y) - geo.nabla_J(geo.J * Y, X) - geo.J * geo.nabla_J(X, Y) +
              geo.J * geo.nabla_J(Y, X);
      for (int k = 0; k < m; ++k) N(k, i, j) = -v[k];
    }
  }
  return N;
}

} // namespace

void complete_from_core(PointGeometry& geo) {
  const int m = geo.dim;
  geo.g_inv = checked_inverse(geo.g);
  geo.g_tilde = geo.g * geo.J;
  if (geo.Gamma.dim() != m) geo.Gamma = Tensor(m, 3);

  geo.Rup = Tensor(m, 4);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int q = 0; q < m; ++q) s += geo.g_inv(l, q) * geo.R(i, j, k, q);
          geo.Rup(l, i, j, k) = s;
        }
      }
    }
  }

  geo.nablaJ = Tensor(m, 3);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int l = 0; l < m; ++l) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += geo.g_inv(l, k) * geo.F(i, j, k);
        geo.nablaJ(i, l, j) = s;
      }
    }
  }
  geo.N = nijenhuis_from_nablaJ(geo);

  geo.rho = ricci_contraction(geo.R, geo.g_inv);
  geo.rho_star = ricci_star_contraction(geo.R, geo.g_inv, geo.J);
  geo.tau = (geo.g_inv.cwiseProduct(geo.rho)).sum();
  geo.tau_star = (geo.g_inv.cwiseProduct(geo.rho_star)).sum();
  geo.theta = Vec::Zero(m);
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) s += geo.g_inv(i, j) * geo.F(i, j, k);
    }
    geo.theta[k] = s;
  }
}

PointGeometry point_geometry(const ChartManifold& m, std::span<const double> p,
                             const GeometryOptions& options) {
  const int dim = m.dim;
  const int K = options.jet_order;
  if (K < 2) throw StructuralError("point_geometry needs jet order >= 2 for curvature");
  if (static_cast<int>(p.size()) != dim) throw StructuralError("point has wrong dimension");

  std::vector<Jet> env;
  env.reserve(dim);
  for (int i = 0; i < dim; ++i) env.push_back(Jet::variable(dim, K, i, p[i]));

  JetMemo memo;
  std::vector<std::vector<Jet>> gj(dim, std::vector<Jet>(dim));
  std::vector<std::vector<Jet>> Jj(dim, std::vector<Jet>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      gj[i][j] = evaluate(m.g(i, j), env, memo);
      Jj[i][j] = evaluate(m.J(i, j), env, memo);
    }
  }

  PointGeometry geo;
  geo.dim = dim;
  geo.p = Vec::Map(p.data(), dim);
  geo.g = Mat(dim, dim);
  geo.J = Mat(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      geo.g(i, j) = gj[i][j].value();
      geo.J(i, j) = Jj[i][j].value();
    }
  }
  det_or_throw(geo.g);

  // Inverse metric and Christoffel symbols, both to order K-1.
  std::vector<std::vector<Jet>> g_low(dim, std::vector<Jet>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g_low[i][j] = gj[i][j].truncated(K - 1);
  }
  const auto ginv = jet_inverse(g_low);

  // dg[a][b][c] = d_a g_bc
  std::vector<std::vector<std::vector<Jet>>> dg(
      dim, std::vector<std::vector<Jet>>(dim, std::vector<Jet>(dim)));
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      for (int c = b; c < dim; ++c) {
        dg[a][b][c] = gj[b][c].derivative(a);
        dg[a][c][b] = dg[a][b][c];
      }
    }
  }

  const Jet zero_k1 = Jet::constant(dim, K - 1, 0.0);
  // Gamma_{l,ij} (first kind), then raise.
  std::vector<Jet> gamma_low(static_cast<std::size_t>(dim * dim * dim));
  auto low = [&](int l, int i, int j) -> Jet& {
    return gamma_low[static_cast<std::size_t>((l * dim + i) * dim + j)];
  };
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        low(l, i, j) = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        low(l, j, i) = low(l, i, j);
      }
    }
  }
  std::vector<Jet> gamma(static_cast<std::size_t>(dim * dim * dim), zero_k1);
  auto G = [&](int k, int i, int j) -> Jet& {
    return gamma[static_cast<std::size_t>((k * dim + i) * dim + j)];
  };
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        Jet s = zero_k1;
        for (int l = 0; l < dim; ++l) {
          if (is_zero(ginv[k][l]) || is_zero(low(l, i, j))) continue;
          s += ginv[k][l] * low(l, i, j);
        }
        G(k, i, j) = s;
        G(k, j, i) = s;
      }
    }
  }
  geo.Gamma = Tensor(dim, 3);
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) geo.Gamma(k, i, j) = G(k, i, j).value();
    }
  }

  // Curvature to order K-2:
  // R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
  const int KR = K - 2;
  std::vector<Jet> gamma_r(gamma.size());
  for (std::size_t q = 0; q < gamma.size(); ++q) gamma_r[q] = gamma[q].truncated(KR);
  auto GR = [&](int k, int i, int j) -> const Jet& {
    return gamma_r[static_cast<std::size_t>((k * dim + i) * dim + j)];
  };
  // dG[a] of G^l_jk
  std::vector<std::vector<Jet>> dgamma(dim, std::vector<Jet>(gamma.size()));
  for (int a = 0; a < dim; ++a) {
    for (std::size_t q = 0; q < gamma.size(); ++q) dgamma[a][q] = gamma[q].derivative(a);
  }
  auto dG = [&](int a, int k, int i, int j) -> const Jet& {
    return dgamma[a][static_cast<std::size_t>((k * dim + i) * dim + j)];
  };

  const Jet zero_r = Jet::constant(dim, KR, 0.0);
  std::vector<Jet> rup(static_cast<std::size_t>(dim * dim * dim * dim), zero_r);
  auto RU = [&](int l, int i, int j, int k) -> Jet& {
    return rup[static_cast<std::size_t>(((l * dim + i) * dim + j) * dim + k)];
  };
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
          Jet s = dG(i, l, j, k) - dG(j, l, i, k);
          for (int q = 0; q < dim; ++q) {
            if (!is_zero(GR(l, i, q)) && !is_zero(GR(q, j, k))) s += GR(l, i, q) * GR(q, j, k);
            if (!is_zero(GR(l, j, q)) && !is_zero(GR(q, i, k))) s -= GR(l, j, q) * GR(q, i, k);
          }
          RU(l, i, j, k) = s;
          RU(l, j, i, k) = -s;
        }
      }
    }
  }
  // Lower: R_ijkl = g_lq R^q_ijk
  std::vector<Jet> rlow(rup.size(), zero_r);
  auto RL = [&](int i, int j, int k, int l) -> Jet& {
    return rlow[static_cast<std::size_t>(((i * dim + j) * dim + k) * dim + l)];
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
          Jet s = zero_r;
          for (int q = 0; q < dim; ++q) {
            const Jet& r = RU(q, i, j, k);
            if (is_zero(r)) continue;
            s += gj[l][q].truncated(KR) * r;
          }
          RL(i, j, k, l) = s;
        }
      }
    }
  }
  geo.R = Tensor(dim, 4);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) geo.R(i, j, k, l) = RL(i, j, k, l).value();
      }
    }
  }

  geo.nablaR = Tensor(dim, 5);
  if (K >= 3) {
    geo.has_nablaR = true;
    for (int d = 0; d < dim; ++d) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          for (int k = 0; k < dim; ++k) {
            for (int l = 0; l < dim; ++l) {
              double s = RL(i, j, k, l).d(d);
              for (int q = 0; q < dim; ++q) {
                s -= geo.Gamma(q, d, i) * geo.R(q, j, k, l) + geo.Gamma(q, d, j) * geo.R(i, q, k, l) +
                     geo.Gamma(q, d, k) * geo.R(i, j, q, l) + geo.Gamma(q, d, l) * geo.R(i, j, k, q);
              }
              geo.nablaR(d, i, j, k, l) = s;
            }
          }
        }
      }
    }
  }

  geo.g_inv = checked_inverse(geo.g);
  geo.g_tilde = geo.g * geo.J;

  geo.Rup = Tensor(dim, 4);
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) geo.Rup(l, i, j, k) = RU(l, i, j, k).value();
      }
    }
  }

  // (nabla_i J)^k_j = d_i J^k_j + G^k_il J^l_j - G^l_ij J^k_l
  geo.nablaJ = Tensor(dim, 3);
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) {
      for (int j = 0; j < dim; ++j) {
        double s = Jj[k][j].d(i);
        for (int l = 0; l < dim; ++l) {
          s += geo.Gamma(k, i, l) * geo.J(l, j) - geo.Gamma(l, i, j) * geo.J(k, l);
        }
        geo.nablaJ(i, k, j) = s;
      }
    }
  }
  geo.F = Tensor(dim, 3);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        double s = 0.0;
        for (int l = 0; l < dim; ++l) s += geo.g(k, l) * geo.nablaJ(i, l, j);
        geo.F(i, j, k) = s;
      }
    }
  }

  // Coordinate Nijenhuis tensor from partial derivatives of J:
  // N(d_i,d_j)^k = J^k_l d_i J^l_j - J^k_l d_j J^l_i - J^a_i d_a J^k_j + J^b_j d_b J^k_i
  geo.N = Tensor(dim, 3);
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int l = 0; l < dim; ++l) {
          s += geo.J(k, l) * (Jj[l][j].d(i) - Jj[l][i].d(j));
          s += -geo.J(l, i) * Jj[k][j].d(l) + geo.J(l, j) * Jj[k][i].d(l);
        }
        geo.N(k, i, j) = s;
      }
    }
  }

  geo.rho = ricci_contraction(geo.R, geo.g_inv);
  geo.rho_star = ricci_star_contraction(geo.R, geo.g_inv, geo.J);
  geo.tau = (geo.g_inv.cwiseProduct(geo.rho)).sum();
  geo.tau_star = (geo.g_inv.cwiseProduct(geo.rho_star)).sum();
  geo.theta = Vec::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) s += geo.g_inv(i, j) * geo.F(i, j, k);
    }
    geo.theta[k] = s;
  }
  return geo;
}

// ---------------------------------------------------------------------------
// Pointwise models

Mat standard_norden_metric(int n) {
  Mat g = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    g(n + i, n + i) = -1.0;
  }
  return g;
}

Mat standard_complex_structure(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    J(n + i, i) = 1.0;  // J e_i = e_{n+i}
    J(i, n + i) = -1.0; // J e_{n+i} = -e_i
  }
  return J;
}

std::string PointwiseModel::provenance() const {
  std::ostringstream os;
  switch (kind) {
  case ModelKind::Flat:
    os << "flat(" << n << ")";
    break;
  case ModelKind::HSphere:
    os.precision(17);
    os << "hsphere(" << n << "," << a << "," << b << ")";
    break;
  case ModelKind::Custom:
    os << "custom";
    break;
  }
  return os.str();
}

PointGeometry PointwiseModel::geometry() const {
  PointGeometry geo;
  geo.dim = dim;
  geo.p = Vec::Zero(dim);
  geo.g = g;
  geo.J = J;
  geo.R = R;
  geo.nablaR = nablaR;
  geo.has_nablaR = true;
  geo.F = F;
  geo.Gamma = Tensor(dim, 3);
  complete_from_core(geo);
  return geo;
}

PointwiseModel make_flat(int n) {
  if (n < 1) throw InvalidParameter("flat model needs n >= 1");
  PointwiseModel m;
  m.dim = 2 * n;
  m.n = n;
  m.kind = ModelKind::Flat;
  m.g = standard_norden_metric(n);
  m.J = standard_complex_structure(n);
  m.R = Tensor(m.dim, 4);
  m.nablaR = Tensor(m.dim, 5);
  m.F = Tensor(m.dim, 3);
  return m;
}

PointwiseModel make_hsphere(int n, double a, double b) {
  if (a == 0.0 && b == 0.0) throw InvalidParameter("h-sphere parameters (a,b) must not be (0,0)");
  if (n < 2) throw InvalidParameter("h-sphere needs n >= 2");
  PointwiseModel m = make_flat(n);
  m.kind = ModelKind::HSphere;
  m.a = a;
  m.b = b;
  const HSphereParams params{n, a, b};
  m.nu = params.nu();
  m.nu_star = params.nu_star();
  m.R = hsphere_curvature(m.g, m.g * m.J, m.nu, m.nu_star);
  return m;
}

// ---------------------------------------------------------------------------
// Orthonormal J-basis

Mat orthonormal_j_basis(const Mat& g, const Mat& J, double tolerance) {
  const int m = static_cast<int>(g.rows());
  const int n = m / 2;
  Mat basis(m, m);
  std::vector<Vec> found; // e_1, Je_1, e_2, Je_2, ...

  auto project = [&](Vec w) {
    for (const Vec& b : found) w -= (w.dot(g * b) / b.dot(g * b)) * b;
    return w;
  };

  std::vector<Vec> seeds;
  for (int i = 0; i < m; ++i) seeds.push_back(Vec::Unit(m, i));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) seeds.push_back(Vec::Unit(m, i) + Vec::Unit(m, j));
  }

  int count = 0;
  for (const Vec& seed : seeds) {
    if (count == n) break;
    Vec v = project(seed);
    if (v.norm() < tolerance) continue;
    // Rotate within span{v, Jv} so that g(e, Je) = 0 and g(e, e) > 0.
    const double A = v.dot(g * v);
    const double B = v.dot(g * (J * v));
    const double r = std::hypot(A, B);
    if (r < tolerance * std::max(1.0, v.squaredNorm())) continue;
    const double phi = 0.5 * std::atan2(B, A);
    Vec e = std::cos(phi) * v + std::sin(phi) * (J * v);
    const double norm2 = e.dot(g * e);
    if (!(norm2 > tolerance)) continue;
    e /= std::sqrt(norm2);
    basis.col(count) = e;
    basis.col(n + count) = J * e;
    found.push_back(e);
    found.push_back(J * e);
    ++count;
  }
  if (count != n) throw SingularityError("could not build an orthonormal J-basis");
  return basis;
}

// ---------------------------------------------------------------------------
// Osculating chart

ChartManifold osculating_chart(const PointwiseModel& model, const std::string& name) {
  // Normal-coordinate expansion: g_ij(x) = g_ij - (1/3) R(d_i, x, x, d_j).
  const int m = model.dim;
  ChartManifold chart;
  chart.name = name;
  chart.dim = m;
  chart.g = ExprMatrix(m);
  chart.J = ExprMatrix(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Expr e(model.g(i, j));
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          const double c = -(model.R(i, k, l, j) + model.R(j, k, l, i)) / 6.0;
          if (c == 0.0) continue;
          e = e + Expr(c) * Expr::variable(k) * Expr::variable(l);
        }
      }
      chart.g(i, j) = e;
      chart.J(i, j) = Expr(model.J(i, j));
    }
  }
  chart.samples.push_back(std::vector<double>(static_cast<std::size_t>(m), 0.0));
  return chart;
}

} // namespace hcn
