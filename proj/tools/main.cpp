// hcn: verification front end for the almost hypercomplex Hermitian-Norden
// structure on tangent bundles of almost Norden manifolds.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.

#include "hcn/config.hpp"
#include "hcn/errors.hpp"
#include "hcn/oracle.hpp"
#include "hcn/report.hpp"
#include "hcn/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hcn;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string manifold;
  int samples = 20;
  std::uint64_t seed = 42;
  std::string u_text;
  int n = 2;
  double a = 1.0, b = 0.0;
  std::string format = "markdown";
  std::vector<std::string> tolerances;
  std::string out;
  std::string table_kind;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

bool is_hsphere(const Options& o) { return o.manifold == "hsphere"; }

HSphereParams hsphere_params(const Options& o) {
  make_hsphere(o.n, o.a, o.b); // validates (n >= 2, (a,b) != (0,0))
  return {o.n, o.a, o.b};
}

Vec parse_u(const std::string& text, int dim) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--u: cannot parse '" + item + "' as a number");
    }
  }
  if (static_cast<int>(values.size()) != dim) {
    throw UsageError("--u needs " + std::to_string(dim) + " components, got " + std::to_string(values.size()));
  }
  return Eigen::Map<Vec>(values.data(), dim);
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects <check>=<value>, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--tol: bad value in '" + item + "'");
    }
  }
  validate_tolerance_overrides(out);
  return out;
}

ChartManifold chart_for(const Options& o) {
  if (is_hsphere(o)) {
    const HSphereParams p = hsphere_params(o);
    return osculating_chart(make_hsphere(p.n, p.a, p.b),
                            "hsphere(n=" + std::to_string(p.n) + ",a=" + format_number(p.a) +
                                ",b=" + format_number(p.b) + ")");
  }
  if (o.manifold.empty()) throw UsageError("--manifold is required");
  return resolve_manifold(o.manifold);
}

RunInfo run_info(const Options& o, const std::string& command, const std::string& manifold) {
  return {command, manifold, o.seed, o.samples, utc_timestamp()};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text;
}

int run_verify_command(const Options& o) {
  const Format format = parse_format(o.format);
  VerifyOptions vo;
  vo.samples = o.samples;
  vo.seed = o.seed;
  vo.tolerance_overrides = parse_tolerances(o.tolerances);
  if (is_hsphere(o)) {
    vo.hsphere = hsphere_params(o);
    vo.p_range = 0.3; // the osculating chart is used near its centre
  }
  const ChartManifold m = chart_for(o);
  const VerifyReport report = run_verify(m, vo);
  emit(o, render(report, run_info(o, "verify", m.name), format));
  if (!report.passed()) {
    for (const auto& c : report.checks) {
      if (!c.passed) std::cerr << "FAIL " << c.name << ": violation " << format_number(c.violation) << "\n";
    }
  }
  return report.passed() ? kExitPass : kExitFail;
}

int run_hsphere_table(const Options& o) {
  const Format format = parse_format(o.format);
  const HSphereParams p = hsphere_params(o);
  const PointwiseModel model = make_hsphere(p.n, p.a, p.b);
  const Vec u = o.u_text.empty() ? Vec(Vec::Unit(model.dim, 0)) : parse_u(o.u_text, model.dim);
  const SectionalTable table = tm_sectional_table(TangentBundlePoint(model.geometry(), u), p);
  RunInfo info = run_info(o, "table hsphere-tm", "hsphere");
  info.samples = 1;
  emit(o, render(table, p, u, info, format));
  return table.max_deviation() <= default_tolerances().at("hsphere_table") ? kExitPass : kExitFail;
}

int run_classify_table(const Options& o) {
  const Format format = parse_format(o.format);
  std::vector<TangentBundlePoint> points;
  std::string name;
  if (is_hsphere(o)) {
    const HSphereParams p = hsphere_params(o);
    const PointwiseModel model = make_hsphere(p.n, p.a, p.b);
    name = "hsphere(n=" + std::to_string(p.n) + ",a=" + format_number(p.a) + ",b=" + format_number(p.b) + ")";
    if (!o.u_text.empty()) {
      points.emplace_back(model.geometry(), parse_u(o.u_text, model.dim));
    } else {
      for (const auto& s : random_tm_samples(model.dim, o.samples, o.seed)) points.emplace_back(model.geometry(), s.u);
    }
  } else {
    const ChartManifold m = chart_for(o);
    name = m.name;
    const Vec fixed_u = o.u_text.empty() ? Vec() : parse_u(o.u_text, m.dim);
    for (const auto& s : random_tm_samples(m.dim, o.samples, o.seed)) {
      points.emplace_back(point_geometry(m, std::span<const double>(s.p.data(), m.dim)),
                          o.u_text.empty() ? s.u : fixed_u);
    }
  }
  emit(o, render(classify(points), run_info(o, "table classify", name), format));
  return kExitPass;
}

int run_describe(const Options& o) {
  const Format format = parse_format(o.format);
  nlohmann::json j = {{"schema_version", kReportSchemaVersion}, {"tool", "hcn"}, {"command", "describe"},
                      {"timestamp", utc_timestamp()}};
  PointGeometry geo;
  if (is_hsphere(o)) {
    const HSphereParams p = hsphere_params(o);
    const PointwiseModel model = make_hsphere(p.n, p.a, p.b);
    j["manifold"] = "hsphere";
    j["model"] = model.provenance();
    j["params"] = {{"n", p.n}, {"a", p.a}, {"b", p.b}, {"nu", p.nu()}, {"nu_star", p.nu_star()}};
    geo = model.geometry();
  } else {
    const ChartManifold m = chart_for(o);
    j["manifold"] = m.name;
    nlohmann::json g = nlohmann::json::object(), J = nlohmann::json::object();
    for (int r = 0; r < m.dim; ++r) {
      for (int c = 0; c < m.dim; ++c) {
        const std::string key = "[" + std::to_string(r + 1) + "][" + std::to_string(c + 1) + "]";
        if (!m.g(r, c).is_literal(0.0)) g[key] = print(m.g(r, c));
        if (!m.J(r, c).is_literal(0.0)) J[key] = print(m.J(r, c));
      }
    }
    j["g"] = g;
    j["J"] = J;
    std::vector<double> p = m.samples.empty() ? std::vector<double>(static_cast<std::size_t>(m.dim), 0.0)
                                              : m.samples.front();
    const StructureReport sr = validate_structure(m, {p});
    j["structure_valid_at_point"] = sr.passed();
    if (!sr.passed()) {
      j["dim"] = m.dim;
      emit(o, format == Format::Json ? j.dump(2) + "\n" : "structure validation failed at the first sample\n");
      return kExitFail;
    }
    geo = point_geometry(m, p);
  }
  j["dim"] = geo.dim;
  j["point"] = std::vector<double>(geo.p.data(), geo.p.data() + geo.dim);
  j["tau"] = geo.tau;
  j["tau_star"] = geo.tau_star;
  auto norm = [](const Tensor& t) {
    double m = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) m = std::max(m, std::abs(t.data()[k]));
    return m;
  };
  j["max_abs_R"] = norm(geo.R);
  j["max_abs_F"] = norm(geo.F);
  j["max_abs_N"] = norm(geo.N);
  j["max_abs_theta"] = max_abs(geo.theta);
  if (format == Format::Json) {
    emit(o, j.dump(2) + "\n");
    return kExitPass;
  }
  std::ostringstream out;
  const bool csv = format == Format::Csv;
  if (csv) out << "key,value\n";
  else out << "# " << j["manifold"].get<std::string>() << "\n\n| key | value |\n|---|---|\n";
  for (const auto& [k, v] : j.items()) {
    if (k == "schema_version" || k == "tool" || k == "command" || k == "manifold") continue;
    std::string text = v.is_number() ? format_number(v.get<double>(), 12) : v.is_string() ? v.get<std::string>() : v.dump();
    if (csv) {
      if (text.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : text) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        text = quoted + "\"";
      }
      out << k << ',' << text << '\n';
    } else {
      out << "| " << k << " | " << text << " |\n";
    }
  }
  emit(o, out.str());
  return kExitPass;
}

void add_manifold_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifold", o.manifold, "built-in name, config path, or 'hsphere'");
  cmd->add_option("--n", o.n, "h-sphere: half dimension (>= 2)");
  cmd->add_option("--a", o.a, "h-sphere: parameter a");
  cmd->add_option("--b", o.b, "h-sphere: parameter b");
  cmd->add_option("--format", o.format, "json, csv or markdown")->capture_default_str();
  cmd->add_option("--out", o.out, "write the report to this path");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks the almost hypercomplex Hermitian-Norden structure on tangent bundles"};
  app.require_subcommand(1);
  Options o;

  auto* verify = app.add_subcommand("verify", "run the verification suite on a manifold");
  add_manifold_options(verify, o);
  verify->add_option("--samples", o.samples, "random (p,u) sample points")->capture_default_str();
  verify->add_option("--seed", o.seed, "random seed")->capture_default_str();
  verify->add_option("--tol", o.tolerances, "loosen a check tolerance: <check>=<value>");

  auto* table = app.add_subcommand("table", "print a sectional-curvature table or a classification");
  table->add_option("kind", o.table_kind, "hsphere-tm or classify")
      ->required()
      ->check(CLI::IsMember({"hsphere-tm", "classify"}));
  add_manifold_options(table, o);
  table->add_option("--u", o.u_text, "fibre point u, comma separated");
  table->add_option("--samples", o.samples, "sample points for classify")->capture_default_str();
  table->add_option("--seed", o.seed, "random seed")->capture_default_str();

  auto* describe = app.add_subcommand("describe", "print the chart and base invariants at a sample point");
  add_manifold_options(describe, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) return run_verify_command(o);
    if (*table) return o.table_kind == "hsphere-tm" ? run_hsphere_table(o) : run_classify_table(o);
    return run_describe(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularityError& e) {
    std::cerr << "numerical singularity: " << e.what() << "\n";
    return kExitFail;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
