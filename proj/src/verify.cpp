#include "hcn/verify.hpp"

#include "hcn/errors.hpp"
#include "hcn/lift.hpp"
#include "hcn/oracle.hpp"
#include "hcn/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

namespace hcn {

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t = {
      {"structure", 1e-10},
      {"hypercomplex_algebra", 1e-12},
      {"metric_compatibility", 1e-12},
      {"oracle.complete_lift", 1e-10},
      {"oracle.brackets", 1e-7},
      {"oracle.nabla_hat", 1e-7},
      {"oracle.N_alpha", 1e-7},
      {"oracle.F_alpha", 1e-7},
      {"oracle.R_hat", 1e-7},
      {"oracle.ricci_hat", 1e-7},
      {"oracle.scalar_hat", 1e-7},
      {"oracle.einstein_check", 1e-7},
      {"F_relation", 1e-9},
      {"F_symmetry", 1e-9},
      {"lee_forms", 1e-8},
      {"adapted_frame", 1e-10},
      {"khat_identities", 1e-8},
      {"holomorphic_planes", 1e-8},
      {"hsphere_table", 1e-12},
  };
  return t;
}

void validate_tolerance_overrides(const std::map<std::string, double>& overrides) {
  const auto& defaults = default_tolerances();
  for (const auto& [name, value] : overrides) {
    const auto it = defaults.find(name);
    if (it == defaults.end()) throw InvalidParameter("unknown check '" + name + "'");
    if (!(value >= kToleranceFloor)) {
      throw InvalidParameter("tolerance for '" + name + "' is below the floor 1e-14");
    }
    if (value < it->second) {
      throw InvalidParameter("tolerance for '" + name + "' may only be loosened (default " +
                             format_number(it->second) + ")");
    }
  }
}

namespace {

class Suite {
public:
  Suite(VerifyReport& report, const VerifyOptions& options) : report_(report), options_(options) {}

  double tolerance(const std::string& name) const {
    const auto it = options_.tolerance_overrides.find(name);
    return it != options_.tolerance_overrides.end() ? it->second : default_tolerances().at(name);
  }

  // Runs body, which returns the violation; singularities fail the check.
  void run(const std::string& name, const std::function<double(std::size_t&)>& body,
           std::string note = {}) {
    CheckResult c;
    c.name = name;
    c.tolerance = tolerance(name);
    c.note = std::move(note);
    try {
      c.violation = body(c.comparisons);
      c.passed = c.violation <= c.tolerance;
    } catch (const SingularityError& e) {
      c.violation = std::numeric_limits<double>::infinity();
      c.passed = false;
      c.note = e.what();
    }
    report_.checks.push_back(std::move(c));
  }

  void add(CheckResult c) {
    c.tolerance = tolerance(c.name);
    c.passed = c.violation <= c.tolerance;
    report_.checks.push_back(std::move(c));
  }

private:
  VerifyReport& report_;
  const VerifyOptions& options_;
};

Vec random_vec(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(m);
  for (int i = 0; i < m; ++i) v(i) = u(rng);
  return v;
}

LiftVector random_lift(int m, std::mt19937_64& rng) {
  Vec h = random_vec(m, rng);
  return {h, random_vec(m, rng)};
}

const char* oracle_note(const std::string& q) {
  if (q == "scalar_hat") return "absolute; oracle scalar curvature of TM";
  if (q == "einstein_check") return "relative; rho^ - (tau^/4n) g^ from the oracle against closed rho^";
  return "relative to max(1, scale)";
}

} // namespace

VerifyReport run_verify(const ChartManifold& m, const VerifyOptions& options) {
  validate_tolerance_overrides(options.tolerance_overrides);
  if (options.samples < 1) throw InvalidParameter("samples must be positive");

  VerifyReport report;
  report.manifold = m.name;
  report.dim = m.dim;
  Suite suite(report, options);
  std::mt19937_64 rng(options.seed);

  const auto samples = random_tm_samples(m.dim, options.samples, options.seed, options.p_range);

  // Structure validation on the configured samples and the random base points.
  std::vector<std::vector<double>> base_points = m.samples;
  for (const auto& s : samples) base_points.emplace_back(s.p.data(), s.p.data() + s.p.size());
  const StructureReport structure = validate_structure(m, base_points, suite.tolerance("structure"));
  {
    CheckResult c{"structure", structure.passed(), 0.0, 0.0, structure.checks.size(), {}};
    for (const auto& sc : structure.checks) {
      if (sc.passed) continue;
      c.violation = std::max(c.violation, std::max(sc.violation, suite.tolerance("structure") * 2));
      if (c.note.empty()) c.note = sc.name + (sc.detail.empty() ? "" : ": " + sc.detail);
    }
    suite.add(c);
  }
  if (!structure.passed()) {
    report.warnings.push_back("structure validation failed; remaining checks skipped");
    std::sort(report.checks.begin(), report.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return report;
  }

  std::vector<TangentBundlePoint> points;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      points.emplace_back(point_geometry(m, std::span<const double>(samples[i].p.data(), m.dim)), samples[i].u);
    } catch (const SingularityError& e) {
      report.warnings.push_back("point " + std::to_string(i) + " skipped: " + e.what());
    }
  }
  const int dim = m.dim;
  constexpr int kLiftsPerPoint = 5;

  suite.run("hypercomplex_algebra", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      for (int k = 0; k < kLiftsPerPoint; ++k) {
        const LiftVector w = random_lift(dim, rng);
        const LiftVector j1 = apply_J(1, w, tbp), j2 = apply_J(2, w, tbp), j3 = apply_J(3, w, tbp);
        worst = std::max({worst, (apply_J(1, j1, tbp) + w).max_abs(), (apply_J(2, j2, tbp) + w).max_abs(),
                          (apply_J(3, j3, tbp) + w).max_abs(), (apply_J(1, j2, tbp) - j3).max_abs(),
                          (apply_J(2, j1, tbp) + j3).max_abs()});
        count += 5;
      }
    }
    return worst;
  }, "J_a^2 = -id, J1 J2 = J3 = -J2 J1");

  suite.run("metric_compatibility", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      for (int k = 0; k < kLiftsPerPoint; ++k) {
        const LiftVector x = random_lift(dim, rng), y = random_lift(dim, rng);
        const double g = ghat(x, y, tbp);
        worst = std::max({worst, std::abs(ghat(apply_J(1, x, tbp), apply_J(1, y, tbp), tbp) - g),
                          std::abs(ghat(apply_J(2, x, tbp), apply_J(2, y, tbp), tbp) + g),
                          std::abs(ghat(apply_J(3, x, tbp), apply_J(3, y, tbp), tbp) + g)});
        count += 3;
      }
    }
    return worst;
  }, "g^(J1.,J1.) = g^, g^(J2.,J2.) = g^(J3.,J3.) = -g^");

  // Oracle comparisons on the induced chart.
  const InducedChart tm = build_tm_chart(m);
  suite.run("oracle.complete_lift", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& s : samples) {
      std::vector<double> pt(s.p.data(), s.p.data() + dim);
      const Mat gb = m.g.evaluate(pt);
      pt.insert(pt.end(), s.u.data(), s.u.data() + dim);
      const Mat gh = tm.chart.g.evaluate(pt);
      const Mat G = tm.connection_block(s.p, s.u);
      for (int k = 0; k < kLiftsPerPoint; ++k) {
        const Vec X = random_vec(dim, rng), Y = random_vec(dim, rng);
        const Vec xh = to_coordinates(LiftVector::horizontal(X), G);
        const Vec yh = to_coordinates(LiftVector::horizontal(Y), G);
        const Vec xv = to_coordinates(LiftVector::vertical(X), G);
        const Vec yv = to_coordinates(LiftVector::vertical(Y), G);
        worst = std::max({worst, std::abs(xh.dot(gh * yv) - X.dot(gb * Y)), std::abs(xh.dot(gh * yh)),
                          std::abs(xv.dot(gh * yv))});
        count += 3;
      }
    }
    return worst;
  }, "coordinate metric on lifted vectors against the complete lift");

  const std::set<std::string> quantities(oracle_quantities().begin(), oracle_quantities().end());
  const OracleReport oracle = oracle_compare(tm, samples, quantities, {options.seed, 3});
  for (const auto& q : oracle.quantities) {
    CheckResult c;
    c.name = "oracle." + q.name;
    c.violation = q.name == "scalar_hat" ? q.max_abs : q.max_rel;
    c.comparisons = q.comparisons;
    c.note = oracle_note(q.name);
    if (q.comparisons == 0) {
      c.violation = std::numeric_limits<double>::infinity();
      c.note = "no comparisons";
    }
    suite.add(c);
  }
  for (const auto& w : oracle.warnings) report.warnings.push_back("oracle: " + w);
  report.observations["unlisted_curvature_max"] = oracle.unlisted_curvature;
  report.observations["unlisted_ricci_max"] = oracle.unlisted_ricci;
  report.observations["einstein_residual"] = oracle.einstein_residual;
  report.observations["base_ricci_max"] = oracle.base_ricci;

  suite.run("F_relation", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      for (int k = 0; k < kLiftsPerPoint; ++k) {
        const LiftVector a = random_lift(dim, rng), b = random_lift(dim, rng), c = random_lift(dim, rng);
        const double rhs = f_lift(2, a, apply_J(3, b, tbp), c, tbp) + f_lift(3, a, b, apply_J(2, c, tbp), tbp);
        worst = std::max(worst, std::abs(f_lift(1, a, b, c, tbp) - rhs));
        ++count;
      }
    }
    return worst;
  }, "F1 = F2(.,J3.,.) + F3(.,.,J2.)");

  suite.run("F_symmetry", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      for (int k = 0; k < kLiftsPerPoint; ++k) {
        const LiftVector a = random_lift(dim, rng), b = random_lift(dim, rng), c = random_lift(dim, rng);
        for (int alpha = 1; alpha <= 3; ++alpha) {
          const double eps = alpha == 1 ? -1.0 : 1.0;
          const double f = f_lift(alpha, a, b, c, tbp);
          worst = std::max({worst,
                            std::abs(f - eps * f_lift(alpha, a, apply_J(alpha, b, tbp), apply_J(alpha, c, tbp), tbp)),
                            std::abs(f - eps * f_lift(alpha, a, c, b, tbp))});
          count += 2;
        }
      }
    }
    return worst;
  }, "F1 skew with sign -1 under J1; F2, F3 symmetric with sign +1");

  suite.run("lee_forms", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      const Vec Z = random_vec(dim, rng);
      const LiftVector zh = LiftVector::horizontal(Z), zv = LiftVector::vertical(Z);
      worst = std::max({worst, std::abs(lee_forms_hat(1, zh, tbp) - tbp.geom.lee(Z)),
                        std::abs(lee_forms_hat(2, zh, tbp) + tbp.geom.ricci(tbp.u, Z)),
                        std::abs(lee_forms_hat(3, zh, tbp) - tbp.geom.ricci_star(tbp.u, Z)),
                        std::abs(lee_forms_hat(3, zv, tbp) - tbp.geom.lee(Z))});
      count += 4;
      for (int alpha = 1; alpha <= 3; ++alpha) {
        const LiftVector w = random_lift(dim, rng);
        worst = std::max(worst, std::abs(lee_form_trace(alpha, w, tbp) - lee_forms_hat(alpha, w, tbp)));
        ++count;
      }
    }
    return worst;
  }, "closed form against base tensors and against the frame trace");

  suite.run("adapted_frame", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      const AdaptedFrame f = adapted_frame(tbp);
      const int N = 4 * f.n;
      for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
          const double expected = a != b ? 0.0 : (a < f.n || a >= 3 * f.n) ? 1.0 : -1.0;
          worst = std::max(worst, std::abs(ghat(f.vectors[a], f.vectors[b], tbp) - expected));
          ++count;
        }
      }
      for (int i = 0; i < f.n; ++i) {
        worst = std::max({worst, (apply_J(1, f.xi_bar(i), tbp) - f.eta(i)).max_abs(),
                          (apply_J(1, f.eta_bar(i), tbp) - f.xi(i)).max_abs(),
                          (apply_J(2, f.eta(i), tbp) - f.xi(i)).max_abs(),
                          (apply_J(2, f.eta_bar(i), tbp) - f.xi_bar(i)).max_abs(),
                          (apply_J(3, f.xi(i), tbp) - f.xi_bar(i)).max_abs(),
                          (apply_J(3, f.eta_bar(i), tbp) - f.eta(i)).max_abs()});
        count += 6;
      }
    }
    return worst;
  }, "Gram matrix of signature (+,-,-,+) and J_alpha relations");

  suite.run("khat_identities", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      const AdaptedFrame f = adapted_frame(tbp);
      const int n2 = 2 * f.n;
      for (int i = 0; i < n2; ++i) {
        for (int j = 0; j < n2; ++j) {
          if (i == j) continue;
          const LiftVector &xi_i = f.vectors[i], &xi_j = f.vectors[j];
          const LiftVector &eta_i = f.vectors[n2 + i], &eta_j = f.vectors[n2 + j];
          const double kxx = sectional_curvature_hat(xi_i, xi_j, tbp);
          const double kee = sectional_curvature_hat(eta_i, eta_j, tbp);
          const double kxe = sectional_curvature_hat(xi_i, eta_j, tbp);
          const double kij = base_basis_sectional(tbp, f.base_basis, i, j);
          worst = std::max({worst, std::abs(kxx + kee + 2 * kxe), std::abs(kxx - kee - 2 * kij)});
          count += 2;
        }
      }
    }
    return worst;
  }, "k(xi,xi) + k(eta,eta) = -2 k(xi,eta) and k(xi,xi) - k(eta,eta) = 2 k_ij");

  suite.run("holomorphic_planes", [&](std::size_t& count) {
    double worst = 0.0;
    for (const auto& tbp : points) {
      const AdaptedFrame f = adapted_frame(tbp);
      for (int i = 0; i < f.n; ++i) {
        worst = std::max({worst, std::abs(sectional_curvature_hat(f.eta(i), f.xi(i), tbp)),
                          std::abs(sectional_curvature_hat(f.eta_bar(i), f.xi_bar(i), tbp)),
                          std::abs(sectional_curvature_hat(f.xi_bar(i), f.eta(i), tbp) -
                                   sectional_curvature_hat(f.eta_bar(i), f.xi(i), tbp))});
        count += 3;
      }
    }
    return worst;
  }, "J2-holomorphic planes flat; equal curvature of the J1-holomorphic pair");

  if (options.hsphere) {
    const HSphereParams hp = *options.hsphere;
    const PointwiseModel model = make_hsphere(hp.n, hp.a, hp.b);
    suite.run("hsphere_table", [&](std::size_t& count) {
      double worst = 0.0;
      for (const auto& s : samples) {
        const SectionalTable t = tm_sectional_table(TangentBundlePoint(model.geometry(), s.u), hp);
        worst = std::max(worst, t.max_deviation());
        count += t.rows.size();
      }
      return worst;
    }, "k^ over the adapted H-basis against +nu, -nu and 0");
  }

  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  return report;
}

} // namespace hcn
