#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <vector>

#include "json.hpp"
#include "stencilcert/accuracy.hpp"
#include "stencilcert/bounds.hpp"
#include "stencilcert/errors.hpp"
#include "stencilcert/growth.hpp"

using nlohmann::json;
namespace sc = stencilcert;

namespace sctool {
namespace {

json num_or_inf(double v) {
  if (std::isfinite(v)) return json(v);
  return json("inf");
}

const char* status_name(sc::GrowthStatus s) {
  switch (s) {
    case sc::GrowthStatus::finite: return "finite";
    case sc::GrowthStatus::infeasible_dual: return "infeasible_dual";
    case sc::GrowthStatus::unbounded_primal: return "unbounded_primal";
  }
  return "?";
}

const char* mode_name(sc::SeminormMode m) {
  switch (m) {
    case sc::SeminormMode::automatic: return "automatic";
    case sc::SeminormMode::exact_closed_form: return "exact";
    case sc::SeminormMode::sampled_lower_estimate: return "sampled";
  }
  return "?";
}

std::vector<double> to_std(const sc::Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void emit(const json& report, const std::string& out_base) {
  std::string text = report.dump(2);
  text.push_back('\n');
  std::cout << text;
  if (!out_base.empty()) {
    std::ofstream out(out_base + ".json");
    if (!out) throw sc::error("cannot write " + out_base + ".json");
    out << text;
  }
}

json problem_summary(const sc::StencilProblem& problem) {
  json j;
  j["kernel"] = problem.kernel.describe();
  j["dimension"] = problem.dimension();
  j["n"] = problem.points.size();
  j["s"] = problem.s;
  j["operator_order"] = problem.op.order();
  return j;
}

json diagnostics_json(const sc::StencilDiagnostics& d) {
  json j;
  j["vandermonde_rank"] = d.vandermonde_rank;
  j["consistency_residual"] = d.consistency_residual;
  j["condition_estimate"] = d.condition_estimate;
  j["duplicate_nodes"] = d.duplicate_nodes;
  j["solver"] = d.solver;
  return j;
}

// The solver reports the worst violated moment by basis index; turn that
// into the human-readable exponent tuple for the error message.
int report_inconsistent(const sc::StencilProblem& problem,
                        const sc::inconsistent_moment_system& e) {
  std::string name = "?";
  sc::PolyBasis basis = problem.basis();
  if (e.worst_moment() >= 0 && e.worst_moment() < basis.size())
    name = basis.members[e.worst_moment()].to_string();
  std::cerr << "error: moment system has no solution; violated moment " << name
            << " (residual " << e.residual() << ")\n";
  return 2;
}

sc::BoundOptions bound_options(const RunConfig& cfg) {
  sc::BoundOptions opt;
  opt.q = cfg.q_override;
  opt.mu = cfg.mu_override;
  opt.seminorm_mode = cfg.seminorm_mode;
  opt.seminorm_samples = cfg.seminorm_samples;
  opt.seed = cfg.seed;
  opt.direct_route = cfg.direct_route;
  opt.direct_q = cfg.direct_q;
  return opt;
}

json bound_json(const sc::BoundReport& b) {
  json j;
  j["rho"] = num_or_inf(b.rho);
  j["rho_status"] = status_name(b.rho_status);
  j["c_dr"] = b.c_dr;
  json sem;
  sem["value"] = b.phi_seminorm.value;
  sem["mode"] = mode_name(b.phi_seminorm.mode);
  sem["r"] = b.phi_seminorm.r;
  sem["gamma"] = b.phi_seminorm.gamma;
  sem["radius"] = b.phi_seminorm.radius;
  sem["samples"] = b.phi_seminorm.samples;
  sem["seed"] = b.phi_seminorm.seed;
  j["phi_seminorm"] = sem;
  j["rhs"] = num_or_inf(b.rhs);
  j["q"] = b.q_used;
  j["mu"] = b.mu_used;
  j["certified"] = b.certified;
  if (b.direct_q) {
    j["direct_q"] = *b.direct_q;
    j["direct_seminorm"] = *b.direct_seminorm;
    j["direct_rhs"] = num_or_inf(*b.direct_rhs);
  }
  return j;
}

}  // namespace

int cmd_weights(const RunConfig& cfg) {
  sc::StencilProblem problem = build_problem(cfg);
  try {
    sc::StencilResult result = sc::compute_weights(problem);
    json rep = problem_summary(problem);
    rep["schema"] = "stencilcert/1";
    rep["command"] = "weights";
    rep["weights"] = to_std(result.weights);
    rep["aux"] = to_std(result.aux);
    rep["diagnostics"] = diagnostics_json(result.diagnostics);
    emit(rep, cfg.out_base);
    if (!cfg.out_base.empty())
      sc::write_values_csv(cfg.out_base + ".csv", result.weights);
    return 0;
  } catch (const sc::inconsistent_moment_system& e) {
    return report_inconsistent(problem, e);
  }
}

int cmd_certify(const RunConfig& cfg) {
  sc::StencilProblem problem = build_problem(cfg);
  try {
    sc::StencilResult result = sc::compute_weights(problem);
    sc::PowerReport power = sc::power_function(problem, result);
    sc::BoundReport bound =
        sc::assemble_error_bound(problem, power.p, bound_options(cfg));

    json rep = problem_summary(problem);
    rep["schema"] = "stencilcert/1";
    rep["command"] = "certify";
    rep["weights"] = to_std(result.weights);
    rep["diagnostics"] = diagnostics_json(result.diagnostics);
    json pw;
    pw["q_wstar"] = power.q_wstar;
    pw["p"] = power.p;
    pw["shortcut"] = power.shortcut;
    pw["shortcut_literal"] = power.shortcut_literal;
    pw["gap"] = power.gap;
    rep["power"] = pw;
    rep["bound"] = bound_json(bound);
    // headline values, repeated at top level for quick consumption
    rep["p"] = power.p;
    rep["rho"] = num_or_inf(bound.rho);
    rep["rhs"] = num_or_inf(bound.rhs);
    rep["certified"] = bound.certified;
    emit(rep, cfg.out_base);
    if (!cfg.out_base.empty())
      sc::write_values_csv(cfg.out_base + ".csv", result.weights);
    return 0;
  } catch (const sc::inconsistent_moment_system& e) {
    return report_inconsistent(problem, e);
  }
}

int cmd_growth(const RunConfig& cfg) {
  if (cfg.center.empty()) throw sc::error("config: \"center\" is required");
  if (cfg.operator_terms.empty())
    throw sc::error("config: \"operator\" is required");
  if (cfg.points_path.empty())
    throw sc::error("config: no stencil nodes; set \"points\" or pass --points");
  if (cfg.q_override < 1)
    throw sc::error("config: growth needs \"q\" >= 1");
  if (cfg.mu_override < 0.0)
    throw sc::error("config: growth needs \"mu\" >= 0");

  const int dim = static_cast<int>(cfg.center.size());
  std::vector<sc::DiffOperator::Term> terms;
  for (const auto& raw : cfg.operator_terms) {
    if (static_cast<int>(raw.alpha.size()) != dim)
      throw sc::error("config: operator \"alpha\" length does not match center");
    terms.emplace_back(sc::MultiIndex(raw.alpha), raw.coeff);
  }
  sc::DiffOperator op(dim, terms);
  sc::Point z = Eigen::Map<const Eigen::VectorXd>(cfg.center.data(), dim);
  std::vector<sc::Point> nodes = sc::read_points_csv(cfg.points_path);
  for (const auto& x : nodes)
    if (x.size() != dim)
      throw sc::error("config: node dimension does not match center");

  sc::GrowthResult dual =
      sc::growth_dual(z, nodes, cfg.q_override, op, cfg.mu_override);
  sc::GrowthResult primal =
      sc::growth_primal(z, nodes, cfg.q_override, op, cfg.mu_override);

  json rep;
  rep["schema"] = "stencilcert/1";
  rep["command"] = "growth";
  rep["q"] = cfg.q_override;
  rep["mu"] = cfg.mu_override;
  rep["value"] = num_or_inf(dual.value);
  rep["status"] = status_name(dual.status);
  rep["primal_value"] = num_or_inf(primal.value);
  rep["primal_status"] = status_name(primal.status);
  emit(rep, cfg.out_base);
  if (!cfg.out_base.empty()) {
    if (dual.dual_weights)
      sc::write_values_csv(cfg.out_base + ".dual.csv", *dual.dual_weights);
    if (primal.primal_poly)
      sc::write_values_csv(cfg.out_base + ".primal.csv", *primal.primal_poly);
  }
  return 0;
}

namespace {

// Built-in smooth test functions with analytic partials of any order.
struct TestFunction {
  bool sinusoid;
  std::vector<double> c;

  static TestFunction make(const std::string& name, int dim) {
    static const double freq[] = {1.0, 0.7, -0.4, 0.9};
    static const double rate[] = {0.5, 0.7, -0.3, 0.4};
    TestFunction f;
    f.sinusoid = (name == "sinusoid");
    for (int i = 0; i < dim; ++i) f.c.push_back((f.sinusoid ? freq : rate)[i % 4]);
    return f;
  }

  double partial(const sc::MultiIndex& alpha, const sc::Point& x) const {
    double phase = 0.3, camp = 1.0;
    for (size_t i = 0; i < c.size(); ++i) {
      phase += c[i] * x[static_cast<int>(i)];
      for (int k = 0; k < alpha[static_cast<int>(i)]; ++k) camp *= c[i];
    }
    if (sinusoid)
      return camp * std::sin(phase + alpha.order() * 1.5707963267948966);
    return camp * std::exp(phase);
  }

  double value(const sc::Point& x) const {
    return partial(sc::MultiIndex::zero(static_cast<int>(c.size())), x);
  }

  double apply(const sc::DiffOperator& op, const sc::Point& z) const {
    double acc = 0.0;
    for (const auto& [alpha, coeff] : op.terms())
      acc += coeff * partial(alpha, z);
    return acc;
  }
};

struct LevelRow {
  double h;
  double error;
  double p;
  double rhs;
};

LevelRow run_level(const sc::StencilProblem& base, double h,
                   const TestFunction& f, const sc::BoundOptions& opt) {
  sc::StencilProblem problem{base.kernel, base.op, base.points.scaled(h),
                             base.s};
  sc::StencilResult result = sc::compute_weights(problem);
  double target = f.apply(problem.op, problem.points.center);
  double acc = 0.0;
  for (int j = 0; j < problem.points.size(); ++j)
    acc += result.weights[j] * f.value(problem.points.nodes[j]);
  sc::PowerReport power = sc::power_function(problem, result);
  sc::BoundReport bound = sc::assemble_error_bound(problem, power.p, opt);
  return LevelRow{h, std::abs(target - acc), power.p, bound.rhs};
}

struct SlopeFit {
  bool ok = false;
  double slope = 0.0;
  bool excluded_coarsest = false;
};

// Least-squares slope of log(value) against log(h).  The coarsest level
// is dropped when its fit residual is more than three times the mean of
// the others (pre-asymptotic contamination).
SlopeFit fit_series(const std::vector<double>& h, const std::vector<double>& v) {
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < h.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) return {};
    pts.emplace_back(std::log(h[i]), std::log(v[i]));
  }
  if (pts.size() < 3) return {};

  auto ls = [](const std::vector<std::pair<double, double>>& p) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : p) sx += x, sy += y, sxx += x * x, sxy += x * y;
    const double n = static_cast<double>(p.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    return std::make_pair(slope, intercept);
  };

  SlopeFit fit;
  auto [slope, intercept] = ls(pts);
  fit.ok = true;
  fit.slope = slope;

  // index of the coarsest level (largest h)
  size_t coarse = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (h[i] > h[coarse]) coarse = i;
  double rc = 0.0, rest = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    double r = std::abs(pts[i].second - (slope * pts[i].first + intercept));
    if (i == coarse)
      rc = r;
    else
      rest += r;
  }
  rest /= static_cast<double>(pts.size() - 1);
  if (pts.size() >= 4 && rc > 3.0 * rest && rest > 0.0) {
    pts.erase(pts.begin() + static_cast<long>(coarse));
    fit.slope = ls(pts).first;
    fit.excluded_coarsest = true;
  }
  return fit;
}

json series_json(const SlopeFit& fit) {
  json j;
  if (fit.ok) {
    j["slope"] = fit.slope;
    j["excluded_coarsest"] = fit.excluded_coarsest;
  } else {
    j["slope"] = nullptr;
    j["excluded_coarsest"] = false;
  }
  return j;
}

}  // namespace

int cmd_converge(const RunConfig& cfg) {
  sc::StencilProblem problem = build_problem(cfg);
  std::vector<double> levels = cfg.levels;
  if (levels.empty())
    levels = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  if (levels.size() < 4)
    throw sc::error("config: converge needs at least 4 levels");

  TestFunction f = TestFunction::make(cfg.function, problem.dimension());
  sc::BoundOptions opt = bound_options(cfg);

  // levels are independent; run them concurrently and reduce in order
  std::vector<std::future<LevelRow>> futures;
  for (double h : levels)
    futures.push_back(std::async(std::launch::async, run_level,
                                 std::cref(problem), h, std::cref(f),
                                 std::cref(opt)));
  std::vector<LevelRow> rows;
  try {
    for (auto& fu : futures) rows.push_back(fu.get());
  } catch (const sc::inconsistent_moment_system& e) {
    return report_inconsistent(problem, e);
  }

  std::vector<double> hs, errs, ps, rhss;
  for (const LevelRow& r : rows) {
    hs.push_back(r.h);
    errs.push_back(r.error);
    ps.push_back(r.p);
    rhss.push_back(r.rhs);
  }

  const double target_scale =
      1.0 + std::abs(f.apply(problem.op, problem.points.center));
  bool degenerate = true;
  for (double e : errs) degenerate = degenerate && e <= 1e-13 * target_scale;

  const sc::Smoothness smooth = problem.kernel.smoothness();
  const double predicted =
      0.5 * (smooth.r + smooth.gamma) - problem.op.order();

  SlopeFit fit_err = degenerate ? SlopeFit{} : fit_series(hs, errs);
  SlopeFit fit_p = fit_series(hs, ps);
  SlopeFit fit_rhs = fit_series(hs, rhss);

  json rep = problem_summary(problem);
  rep["schema"] = "stencilcert/1";
  rep["command"] = "converge";
  rep["function"] = cfg.function;
  rep["status"] = degenerate ? "degenerate" : "ok";
  rep["predicted_slope"] = predicted;
  json jrows = json::array();
  for (const LevelRow& r : rows) {
    json row;
    row["h"] = r.h;
    row["error"] = r.error;
    row["p"] = r.p;
    row["rhs"] = num_or_inf(r.rhs);
    jrows.push_back(row);
  }
  rep["rows"] = jrows;
  json series;
  series["error"] = series_json(fit_err);
  series["p"] = series_json(fit_p);
  series["rhs"] = series_json(fit_rhs);
  rep["series"] = series;
  rep["below_predicted"] =
      fit_err.ok ? json(fit_err.slope < predicted - 0.1) : json(nullptr);
  emit(rep, cfg.out_base);
  return 0;
}

}  // namespace sctool
