#pragma once

// Brute-force reference for the lifted structure: TM as an ordinary chart
// manifold in induced coordinates (x^1..x^m, y^1..y^m), with every component
// built symbolically from the base chart and fed through point_geometry.
//
//   g^(dx_i, dx_j) = y^k d_k g_ij,   g^(dx_i, dy_j) = g_ij,   g^(dy, dy) = 0
//   dx_i = (d_i)^H + G^k_i (d_k)^V,  G^k_i = y^j Gamma^k_ji
//
// J_alpha in coordinates is P J_alpha^frame P^-1 with P = [[I,0],[-G,I]]
// taking (h, v) lift components to coordinate components.

#include "hcn/geometry.hpp"
#include "hcn/lift.hpp"

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace hcn {

struct InducedChart {
  ChartManifold base;
  ChartManifold chart;          ///< metric g^, J = J1
  std::array<ExprMatrix, 3> J;  ///< J_1, J_2, J_3 in induced coordinates
  ExprMatrix base_inverse;      ///< g^ij of the base, by cofactors
  std::vector<Expr> christoffel;///< Gamma^k_ij at index (k*m + i)*m + j
  ExprMatrix G;                 ///< G^k_i, an m x m block

  int base_dim() const { return base.dim; }
  /// The chart with J_alpha installed as its complex structure.
  ChartManifold with_structure(int alpha) const;
  /// G^k_i at (p, u).
  Mat connection_block(const Vec& p, const Vec& u) const;
};

InducedChart build_tm_chart(const ChartManifold& base);

/// (h, v) -> coordinate components (h, v - G h) and back.
Vec to_coordinates(const LiftVector& w, const Mat& G);
LiftVector from_coordinates(const Vec& c, const Mat& G);

struct TMSample {
  Vec p;
  Vec u;
};

/// `count` points with p and u uniform in [-p_range, p_range]^m and
/// [-1, 1]^m, rejecting u inside the ball of radius u_exclusion.
std::vector<TMSample> random_tm_samples(int m, int count, std::uint64_t seed,
                                        double p_range = 1.0, double u_exclusion = 0.1);

inline const std::vector<std::string>& oracle_quantities() {
  static const std::vector<std::string> names = {"brackets", "nabla_hat",  "N_alpha",
                                                 "F_alpha",  "R_hat",      "ricci_hat",
                                                 "scalar_hat", "einstein_check"};
  return names;
}

struct QuantityDeviation {
  std::string name;
  double max_abs = 0.0;  ///< max |closed - oracle|
  double scale = 0.0;    ///< max |closed| or |oracle| over the comparisons
  double max_rel = 0.0;  ///< max_abs / max(1, scale)
  std::size_t comparisons = 0;
  std::string note;
};

struct OracleReport {
  std::vector<QuantityDeviation> quantities;
  /// Largest oracle magnitude of components the closed forms list as zero.
  double unlisted_curvature = 0.0;
  double unlisted_ricci = 0.0;
  /// max |rho^ - (tau^/4n) g^| and whether the base is Ricci-flat.
  double einstein_residual = 0.0;
  double base_ricci = 0.0;
  std::vector<std::string> warnings;
  std::size_t points_used = 0;

  const QuantityDeviation* find(const std::string& name) const;
};

struct OracleOptions {
  std::uint64_t seed = 42;
  int fields_per_point = 3; ///< random affine fields for brackets and nabla^
};

OracleReport oracle_compare(const InducedChart& tm, const std::vector<TMSample>& points,
                            const std::set<std::string>& quantities,
                            const OracleOptions& options = {});

} // namespace hcn
