#include "hcn/oracle.hpp"

#include "hcn/errors.hpp"

#include <cmath>
#include <map>
#include <random>

namespace hcn {

namespace {

bool is_zero(const Expr& e) { return e.is_literal(0.0); }

// Determinant of the submatrix on the given row and column masks, by
// Laplace expansion along the lowest row, memoized per mask pair.
class MinorTable {
public:
  explicit MinorTable(const ExprMatrix& a) : a_(a) {}

  Expr det(unsigned rows, unsigned cols) {
    if (rows == 0) return Expr(1.0);
    const auto key = std::make_pair(rows, cols);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int r = 0;
    while (!(rows & (1u << r))) ++r;
    Expr sum(0.0);
    int sign = 1;
    for (int c = 0; c < a_.dim(); ++c) {
      if (!(cols & (1u << c))) continue;
      const Expr& entry = a_(r, c);
      if (!is_zero(entry)) {
        Expr term = entry * det(rows & ~(1u << r), cols & ~(1u << c));
        sum = sign > 0 ? sum + term : sum - term;
      }
      sign = -sign;
    }
    memo_.emplace(key, sum);
    return sum;
  }

private:
  const ExprMatrix& a_;
  std::map<std::pair<unsigned, unsigned>, Expr> memo_;
};

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  const int m = a.dim();
  ExprMatrix c(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Expr s(0.0);
      for (int k = 0; k < m; ++k) {
        if (is_zero(a(i, k)) || is_zero(b(k, j))) continue;
        s = s + a(i, k) * b(k, j);
      }
      c(i, j) = s;
    }
  }
  return c;
}

// Lift-frame action of J_alpha on (h, v), with the base J as expressions.
ExprMatrix frame_structure(int alpha, const ExprMatrix& J) {
  const int m = J.dim();
  ExprMatrix out(2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    for (int j = 0; j < 2 * m; ++j) out(i, j) = Expr(0.0);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      switch (alpha) {
      case 1:
        out(i, j) = -J(i, j);
        out(m + i, m + j) = J(i, j);
        break;
      case 2:
        if (i == j) {
          out(i, m + j) = Expr(-1.0);
          out(m + i, j) = Expr(1.0);
        }
        break;
      default:
        out(i, m + j) = J(i, j);
        out(m + i, j) = J(i, j);
        break;
      }
    }
  }
  return out;
}

} // namespace

ChartManifold InducedChart::with_structure(int alpha) const {
  if (alpha < 1 || alpha > 3) throw StructuralError("alpha must be 1, 2 or 3");
  ChartManifold c = chart;
  c.J = J[static_cast<std::size_t>(alpha - 1)];
  c.name = chart.name + "/J" + std::to_string(alpha);
  return c;
}

Mat InducedChart::connection_block(const Vec& p, const Vec& u) const {
  const int m = base.dim;
  std::vector<double> pt(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < m; ++i) {
    pt[static_cast<std::size_t>(i)] = p[i];
    pt[static_cast<std::size_t>(m + i)] = u[i];
  }
  Mat out(m, m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) out(k, i) = evaluate(G(k, i), pt);
  }
  return out;
}

InducedChart build_tm_chart(const ChartManifold& base) {
  const int m = base.dim;
  if (2 * m > 16) throw StructuralError("induced chart would exceed 16 coordinates");
  InducedChart tm;
  tm.base = base;

  // Inverse metric by cofactors.
  MinorTable minors(base.g);
  const unsigned full = (1u << m) - 1u;
  const Expr det = minors.det(full, full);
  tm.base_inverse = ExprMatrix(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Expr minor = minors.det(full & ~(1u << j), full & ~(1u << i));
      Expr cof = ((i + j) % 2 == 0) ? minor : -minor;
      tm.base_inverse(i, j) = is_zero(cof) ? Expr(0.0) : cof / det;
    }
  }

  // dg[a][b][c] = d_a g_bc
  std::vector<Expr> dg(static_cast<std::size_t>(m * m * m));
  auto DG = [&](int a, int b, int c) -> Expr& {
    return dg[static_cast<std::size_t>((a * m + b) * m + c)];
  };
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) DG(a, b, c) = differentiate(base.g(b, c), a);
    }
  }

  tm.christoffel.assign(static_cast<std::size_t>(m * m * m), Expr(0.0));
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        Expr s(0.0);
        for (int l = 0; l < m; ++l) {
          if (is_zero(tm.base_inverse(k, l))) continue;
          Expr low = DG(i, j, l) + DG(j, i, l) - DG(l, i, j);
          if (is_zero(low)) continue;
          s = s + tm.base_inverse(k, l) * low;
        }
        if (!is_zero(s)) s = Expr(0.5) * s;
        tm.christoffel[static_cast<std::size_t>((k * m + i) * m + j)] = s;
        tm.christoffel[static_cast<std::size_t>((k * m + j) * m + i)] = s;
      }
    }
  }

  tm.G = ExprMatrix(m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      Expr s(0.0);
      for (int j = 0; j < m; ++j) {
        const Expr& gamma = tm.christoffel[static_cast<std::size_t>((k * m + j) * m + i)];
        if (is_zero(gamma)) continue;
        s = s + Expr::variable(m + j) * gamma;
      }
      tm.G(k, i) = s;
    }
  }

  // Metric.
  ChartManifold& c = tm.chart;
  c.name = "T(" + base.name + ")";
  c.dim = 2 * m;
  c.g = ExprMatrix(2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    for (int j = 0; j < 2 * m; ++j) c.g(i, j) = Expr(0.0);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Expr s(0.0);
      for (int k = 0; k < m; ++k) {
        if (is_zero(DG(k, i, j))) continue;
        s = s + Expr::variable(m + k) * DG(k, i, j);
      }
      c.g(i, j) = s;
      c.g(i, m + j) = base.g(i, j);
      c.g(m + i, j) = base.g(i, j);
    }
  }

  // Structures: P * frame * P^-1.
  ExprMatrix P(2 * m), Pinv(2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    for (int j = 0; j < 2 * m; ++j) {
      P(i, j) = Expr(i == j ? 1.0 : 0.0);
      Pinv(i, j) = Expr(i == j ? 1.0 : 0.0);
    }
  }
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      P(m + k, i) = is_zero(tm.G(k, i)) ? Expr(0.0) : -tm.G(k, i);
      Pinv(m + k, i) = tm.G(k, i);
    }
  }
  for (int alpha = 1; alpha <= 3; ++alpha) {
    tm.J[static_cast<std::size_t>(alpha - 1)] =
        multiply(multiply(P, frame_structure(alpha, base.J)), Pinv);
  }
  c.J = tm.J[0];

  for (const auto& s : base.samples) {
    std::vector<double> pt(s);
    pt.resize(static_cast<std::size_t>(2 * m), 0.0);
    c.samples.push_back(std::move(pt));
  }
  return tm;
}

Vec to_coordinates(const LiftVector& w, const Mat& G) {
  const auto m = w.h.size();
  Vec c(2 * m);
  c.head(m) = w.h;
  c.tail(m) = w.v - G * w.h;
  return c;
}

LiftVector from_coordinates(const Vec& c, const Mat& G) {
  const auto m = c.size() / 2;
  const Vec a = c.head(m);
  return {a, c.tail(m) + G * a};
}

std::vector<TMSample> random_tm_samples(int m, int count, std::uint64_t seed, double p_range,
                                        double u_exclusion) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<TMSample> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    TMSample s{Vec(m), Vec(m)};
    for (int i = 0; i < m; ++i) s.p[i] = p_range * unit(rng);
    do {
      for (int i = 0; i < m; ++i) s.u[i] = unit(rng);
    } while (s.u.norm() < u_exclusion);
    out.push_back(std::move(s));
  }
  return out;
}

const QuantityDeviation* OracleReport::find(const std::string& name) const {
  for (const auto& q : quantities) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

namespace {

struct Accumulator {
  QuantityDeviation q;

  void add(double closed, double oracle) {
    q.max_abs = std::max(q.max_abs, std::abs(closed - oracle));
    q.scale = std::max({q.scale, std::abs(closed), std::abs(oracle)});
    ++q.comparisons;
  }
  void add(const LiftVector& closed, const LiftVector& oracle) {
    for (int i = 0; i < closed.h.size(); ++i) add(closed.h[i], oracle.h[i]);
    for (int i = 0; i < closed.v.size(); ++i) add(closed.v[i], oracle.v[i]);
  }
  QuantityDeviation finish() {
    q.max_rel = q.max_abs / std::max(1.0, q.scale);
    return q;
  }
};

// Value and Jacobian at (p, u) of a lifted affine base field, computed from
// its coordinate expression with first-order jets.
struct CoordinateField {
  Vec value;
  Mat jacobian;
};

CoordinateField lifted_field(const InducedChart& tm, Lift type, const AffineField& X,
                             const TMSample& s) {
  const int m = tm.base_dim();
  std::vector<Expr> base_field(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Expr e(X.value[i]);
    for (int a = 0; a < m; ++a) {
      if (X.jacobian(i, a) == 0.0) continue;
      e = e + Expr(X.jacobian(i, a)) * (Expr::variable(a) - Expr(s.p[a]));
    }
    base_field[static_cast<std::size_t>(i)] = e;
  }
  std::vector<Expr> comps(static_cast<std::size_t>(2 * m), Expr(0.0));
  for (int i = 0; i < m; ++i) {
    if (type == Lift::V) {
      comps[static_cast<std::size_t>(m + i)] = base_field[static_cast<std::size_t>(i)];
    } else {
      comps[static_cast<std::size_t>(i)] = base_field[static_cast<std::size_t>(i)];
      Expr v(0.0);
      for (int j = 0; j < m; ++j) {
        if (is_zero(tm.G(i, j))) continue;
        v = v - tm.G(i, j) * base_field[static_cast<std::size_t>(j)];
      }
      comps[static_cast<std::size_t>(m + i)] = v;
    }
  }
  std::vector<Jet> env;
  for (int i = 0; i < m; ++i) env.push_back(Jet::variable(2 * m, 1, i, s.p[i]));
  for (int i = 0; i < m; ++i) env.push_back(Jet::variable(2 * m, 1, m + i, s.u[i]));
  JetMemo memo;
  CoordinateField f{Vec(2 * m), Mat(2 * m, 2 * m)};
  for (int c = 0; c < 2 * m; ++c) {
    const Jet j = evaluate(comps[static_cast<std::size_t>(c)], env, memo);
    f.value[c] = j.value();
    for (int a = 0; a < 2 * m; ++a) f.jacobian(c, a) = j.d(a);
  }
  return f;
}

AffineField random_field(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  AffineField f{Vec(m), Mat(m, m)};
  for (int i = 0; i < m; ++i) f.value[i] = unit(rng);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) f.jacobian(i, j) = unit(rng);
  }
  return f;
}

} // namespace

OracleReport oracle_compare(const InducedChart& tm, const std::vector<TMSample>& points,
                            const std::set<std::string>& quantities,
                            const OracleOptions& options) {
  for (const auto& q : quantities) {
    bool known = false;
    for (const auto& name : oracle_quantities()) known = known || name == q;
    if (!known) throw StructuralError("unknown oracle quantity '" + q + "'");
  }
  const int m = tm.base_dim();
  const int M = 2 * m;
  auto want = [&](const char* q) { return quantities.count(q) > 0; };

  std::map<std::string, Accumulator> acc;
  for (const auto& q : quantities) acc[q].q.name = q;

  OracleReport report;
  std::mt19937_64 rng(options.seed);
  const bool need_structures = want("N_alpha") || want("F_alpha");

  std::vector<std::pair<Lift, Vec>> basis;
  for (Lift t : {Lift::H, Lift::V}) {
    for (int i = 0; i < m; ++i) basis.emplace_back(t, Vec::Unit(m, i));
  }

  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const TMSample& s = points[idx];
    std::vector<double> pt(static_cast<std::size_t>(M));
    for (int i = 0; i < m; ++i) {
      pt[static_cast<std::size_t>(i)] = s.p[i];
      pt[static_cast<std::size_t>(m + i)] = s.u[i];
    }

    PointGeometry base_geo;
    std::array<PointGeometry, 3> hat;
    try {
      base_geo = point_geometry(tm.base, std::span<const double>(s.p.data(), m), {3});
      hat[0] = point_geometry(tm.with_structure(1), pt, {2});
      if (need_structures) {
        hat[1] = point_geometry(tm.with_structure(2), pt, {2});
        hat[2] = point_geometry(tm.with_structure(3), pt, {2});
      }
    } catch (const SingularityError& e) {
      report.warnings.push_back("point " + std::to_string(idx) + " skipped: " + e.what());
      continue;
    }
    ++report.points_used;
    const TangentBundlePoint tbp(base_geo, s.u);
    const Mat G = tm.connection_block(s.p, s.u);
    const PointGeometry& oracle = hat[0];
    auto coords = [&](Lift t, const Vec& x) { return to_coordinates(LiftVector::lift(t, x), G); };

    if (want("N_alpha")) {
      for (int alpha = 1; alpha <= 3; ++alpha) {
        const PointGeometry& o = hat[static_cast<std::size_t>(alpha - 1)];
        for (const auto& [t1, X] : basis) {
          for (const auto& [t2, Y] : basis) {
            const LiftVector closed = nijenhuis_lift(alpha, t1, X, t2, Y, tbp);
            const LiftVector direct = from_coordinates(o.nijenhuis(coords(t1, X), coords(t2, Y)), G);
            acc["N_alpha"].add(closed, direct);
          }
        }
      }
    }

    if (want("F_alpha")) {
      for (int alpha = 1; alpha <= 3; ++alpha) {
        const PointGeometry& o = hat[static_cast<std::size_t>(alpha - 1)];
        for (const auto& [t1, X] : basis) {
          const Vec cx = coords(t1, X);
          for (const auto& [t2, Y] : basis) {
            const Vec cy = coords(t2, Y);
            for (const auto& [t3, Z] : basis) {
              acc["F_alpha"].add(f_lift(alpha, t1, X, t2, Y, t3, Z, tbp),
                                 o.structure(cx, cy, coords(t3, Z)));
            }
          }
        }
      }
    }

    if (want("R_hat")) {
      for (const auto& [t1, X] : basis) {
        for (const auto& [t2, Y] : basis) {
          for (const auto& [t3, Z] : basis) {
            const LiftVector closed = curvature_hat(t1, X, t2, Y, t3, Z, tbp);
            const LiftVector direct = from_coordinates(
                oracle.curvature(coords(t1, X), coords(t2, Y), coords(t3, Z)), G);
            acc["R_hat"].add(closed, direct);
            const int vertical = (t1 == Lift::V) + (t2 == Lift::V) + (t3 == Lift::V);
            if (vertical >= 2) report.unlisted_curvature = std::max(report.unlisted_curvature, direct.max_abs());
          }
        }
      }
    }

    if (want("ricci_hat")) {
      for (const auto& [t1, X] : basis) {
        for (const auto& [t2, Y] : basis) {
          const double direct = oracle.ricci(coords(t1, X), coords(t2, Y));
          acc["ricci_hat"].add(ricci_hat(LiftVector::lift(t1, X), LiftVector::lift(t2, Y), tbp), direct);
          if (t1 == Lift::V || t2 == Lift::V) {
            report.unlisted_ricci = std::max(report.unlisted_ricci, std::abs(direct));
          }
        }
      }
    }

    if (want("scalar_hat")) acc["scalar_hat"].add(0.0, oracle.tau);

    if (want("einstein_check")) {
      // rho^ - (tau^ / dim TM) g^ on lifted basis pairs; the closed form has
      // tau^ = 0, leaving rho^ itself.
      report.base_ricci = std::max(report.base_ricci, max_abs(base_geo.rho));
      for (const auto& [t1, X] : basis) {
        for (const auto& [t2, Y] : basis) {
          const LiftVector w1 = LiftVector::lift(t1, X), w2 = LiftVector::lift(t2, Y);
          const double direct =
              oracle.ricci(coords(t1, X), coords(t2, Y)) - oracle.tau / M * ghat(w1, w2, tbp);
          report.einstein_residual = std::max(report.einstein_residual, std::abs(direct));
          acc["einstein_check"].add(ricci_hat(w1, w2, tbp), direct);
        }
      }
    }

    if (want("brackets") || want("nabla_hat")) {
      for (int f = 0; f < options.fields_per_point; ++f) {
        const AffineField X = random_field(m, rng);
        const AffineField Y = random_field(m, rng);
        for (Lift t1 : {Lift::H, Lift::V}) {
          const CoordinateField A = lifted_field(tm, t1, X, s);
          for (Lift t2 : {Lift::H, Lift::V}) {
            const CoordinateField B = lifted_field(tm, t2, Y, s);
            if (want("brackets")) {
              const Vec direct = B.jacobian * A.value - A.jacobian * B.value;
              acc["brackets"].add(bracket_hat(t1, X, t2, Y, tbp), from_coordinates(direct, G));
            }
            if (want("nabla_hat")) {
              const Vec direct = oracle.covariant(A.value, B.value, B.jacobian);
              acc["nabla_hat"].add(nabla_hat(t1, X.value, t2, Y, tbp), from_coordinates(direct, G));
            }
          }
        }
      }
    }
  }

  for (const auto& q : quantities) {
    QuantityDeviation d = acc[q].finish();
    if (q == "scalar_hat") d.note = "oracle scalar curvature of TM against 0";
    if (q == "einstein_check") {
      d.note = "rho^ - (tau^/dim TM) g^ against the closed-form rho^";
    }
    report.quantities.push_back(std::move(d));
  }
  if (report.points_used == 0 && !points.empty()) {
    report.warnings.push_back("no sample point could be evaluated");
  }
  return report;
}

} // namespace hcn
