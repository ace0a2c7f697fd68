#include "config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "stencilcert/errors.hpp"

using nlohmann::json;
using stencilcert::error;

namespace sctool {
namespace {

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw error("config: " + where + " must be an object");
}

// Reject anything outside the allowed key set so a misspelled option can
// never be silently ignored.
void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw error("config: unknown field \"" + it.key() + "\" in " + where);
  }
}

double need_number(const json& obj, const std::string& key,
                   const std::string& where) {
  if (!obj.contains(key))
    throw error("config: missing field \"" + key + "\" in " + where);
  if (!obj[key].is_number())
    throw error("config: field \"" + key + "\" in " + where +
                " must be a number");
  return obj[key].get<double>();
}

int need_int(const json& obj, const std::string& key,
             const std::string& where) {
  if (!obj.contains(key))
    throw error("config: missing field \"" + key + "\" in " + where);
  if (!obj[key].is_number_integer())
    throw error("config: field \"" + key + "\" in " + where +
                " must be an integer");
  return obj[key].get<int>();
}

int optional_int(const json& obj, const std::string& key,
                 const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw error("config: field \"" + key + "\" in " + where +
                " must be an integer");
  return obj[key].get<int>();
}

stencilcert::KernelSpec parse_kernel(const json& j) {
  expect_object(j, "\"kernel\"");
  expect_keys(j, "\"kernel\"", {"family", "nu", "n", "d", "s", "gamma"});
  if (!j.contains("family") || !j["family"].is_string())
    throw error("config: \"kernel\" needs a string field \"family\"");
  const std::string family = j["family"].get<std::string>();

  if (family == "phs") {
    double nu = need_number(j, "nu", "\"kernel\"");
    int s = optional_int(j, "s", "\"kernel\"", -1);
    if (j.contains("n") || j.contains("d") || j.contains("gamma"))
      throw error("config: phs kernel takes only \"nu\" and \"s\"");
    return stencilcert::KernelSpec::polyharmonic(nu, s);
  }
  if (family == "tps") {
    int n = need_int(j, "n", "\"kernel\"");
    int s = optional_int(j, "s", "\"kernel\"", -1);
    double gamma = 0.9;
    if (j.contains("gamma")) gamma = need_number(j, "gamma", "\"kernel\"");
    if (j.contains("nu") || j.contains("d"))
      throw error("config: tps kernel takes only \"n\", \"s\" and \"gamma\"");
    return stencilcert::KernelSpec::thin_plate(n, s, gamma);
  }
  if (family == "wendland") {
    int d = need_int(j, "d", "\"kernel\"");
    int n = need_int(j, "n", "\"kernel\"");
    int s = optional_int(j, "s", "\"kernel\"", 0);
    if (j.contains("nu") || j.contains("gamma"))
      throw error("config: wendland kernel takes only \"d\", \"n\" and \"s\"");
    return stencilcert::KernelSpec::wendland(d, n, s);
  }
  throw error("config: unknown kernel family \"" + family +
              "\" (expected phs, tps or wendland)");
}

std::vector<RawTerm> parse_operator(const json& j) {
  if (!j.is_array() || j.empty())
    throw error("config: \"operator\" must be a non-empty array of terms");
  std::vector<RawTerm> terms;
  for (const auto& t : j) {
    expect_object(t, "operator term");
    expect_keys(t, "operator term", {"alpha", "coeff"});
    if (!t.contains("alpha") || !t["alpha"].is_array())
      throw error("config: operator term needs an integer array \"alpha\"");
    RawTerm raw;
    for (const auto& e : t["alpha"]) {
      if (!e.is_number_integer() || e.get<int>() < 0)
        throw error("config: \"alpha\" entries must be nonnegative integers");
      raw.alpha.push_back(e.get<int>());
    }
    raw.coeff = need_number(t, "coeff", "operator term");
    terms.push_back(std::move(raw));
  }
  return terms;
}

stencilcert::SeminormMode parse_mode(const std::string& s) {
  if (s == "automatic") return stencilcert::SeminormMode::automatic;
  if (s == "exact") return stencilcert::SeminormMode::exact_closed_form;
  if (s == "sampled") return stencilcert::SeminormMode::sampled_lower_estimate;
  throw error("config: \"seminorm_mode\" must be automatic, exact or sampled");
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw error("config: " + path + ": " + e.what());
  }
  expect_object(j, "top level");
  expect_keys(j, "top level",
              {"kernel", "operator", "center", "points", "q", "mu", "seed",
               "out", "seminorm_mode", "seminorm_samples", "direct_route",
               "direct_q", "function", "levels"});

  RunConfig cfg;
  if (j.contains("kernel")) {
    cfg.kernel = parse_kernel(j["kernel"]);
    cfg.s = cfg.kernel->cpd_order();
  }
  if (j.contains("operator")) cfg.operator_terms = parse_operator(j["operator"]);
  if (j.contains("center")) {
    if (!j["center"].is_array() || j["center"].empty())
      throw error("config: \"center\" must be a non-empty number array");
    for (const auto& e : j["center"]) {
      if (!e.is_number())
        throw error("config: \"center\" entries must be numbers");
      cfg.center.push_back(e.get<double>());
    }
  }
  if (j.contains("points")) {
    if (!j["points"].is_string())
      throw error("config: \"points\" must be a CSV file path");
    cfg.points_path = j["points"].get<std::string>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string())
      throw error("config: \"out\" must be a path string");
    cfg.out_base = j["out"].get<std::string>();
  }
  cfg.q_override = optional_int(j, "q", "top level", -1);
  if (j.contains("mu")) cfg.mu_override = need_number(j, "mu", "top level");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw error("config: \"seed\" must be a nonnegative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("seminorm_mode")) {
    if (!j["seminorm_mode"].is_string())
      throw error("config: \"seminorm_mode\" must be a string");
    cfg.seminorm_mode = parse_mode(j["seminorm_mode"].get<std::string>());
  }
  cfg.seminorm_samples =
      optional_int(j, "seminorm_samples", "top level", cfg.seminorm_samples);
  if (cfg.seminorm_samples <= 0)
    throw error("config: \"seminorm_samples\" must be positive");
  if (j.contains("direct_route")) {
    if (!j["direct_route"].is_boolean())
      throw error("config: \"direct_route\" must be a boolean");
    cfg.direct_route = j["direct_route"].get<bool>();
  }
  cfg.direct_q = optional_int(j, "direct_q", "top level", -1);
  if (j.contains("function")) {
    if (!j["function"].is_string())
      throw error("config: \"function\" must be a string");
    cfg.function = j["function"].get<std::string>();
    if (cfg.function != "sinusoid" && cfg.function != "exponential")
      throw error("config: \"function\" must be sinusoid or exponential");
  }
  if (j.contains("levels")) {
    if (!j["levels"].is_array())
      throw error("config: \"levels\" must be an array of scale factors");
    for (const auto& e : j["levels"]) {
      if (!e.is_number() || e.get<double>() <= 0.0)
        throw error("config: \"levels\" entries must be positive numbers");
      cfg.levels.push_back(e.get<double>());
    }
  }
  return cfg;
}

stencilcert::StencilProblem build_problem(const RunConfig& cfg) {
  if (!cfg.kernel) throw error("config: \"kernel\" is required");
  if (cfg.operator_terms.empty())
    throw error("config: \"operator\" is required");
  if (cfg.center.empty()) throw error("config: \"center\" is required");
  if (cfg.points_path.empty())
    throw error("config: no stencil nodes; set \"points\" or pass --points");

  const int dim = static_cast<int>(cfg.center.size());
  std::vector<stencilcert::DiffOperator::Term> terms;
  for (const auto& raw : cfg.operator_terms) {
    if (static_cast<int>(raw.alpha.size()) != dim)
      throw error("config: operator \"alpha\" length does not match center");
    terms.emplace_back(stencilcert::MultiIndex(raw.alpha), raw.coeff);
  }

  stencilcert::PointSet pts;
  pts.center = Eigen::Map<const Eigen::VectorXd>(cfg.center.data(), dim);
  pts.nodes = stencilcert::read_points_csv(cfg.points_path);

  stencilcert::StencilProblem problem{*cfg.kernel,
                                      stencilcert::DiffOperator(dim, terms),
                                      std::move(pts), cfg.s};
  problem.validate();
  return problem;
}

}  // namespace sctool
