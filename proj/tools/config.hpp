#ifndef STENCILCERT_TOOLS_CONFIG_HPP
#define STENCILCERT_TOOLS_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "stencilcert/bounds.hpp"
#include "stencilcert/stencil.hpp"

namespace sctool {

// One "alpha, coeff" entry of the operator array, kept raw until the
// ambient dimension is known.
struct RawTerm {
  std::vector<int> alpha;
  double coeff = 0.0;
};

// Everything a run can specify.  Loaded from a JSON config file; a few
// fields can be overridden from the command line afterwards.  Unknown
// keys anywhere in the file are a hard error so that typos never pass
// silently.
struct RunConfig {
  std::optional<stencilcert::KernelSpec> kernel;
  int s = -1;  // -1: take the kernel's minimal admissible order

  std::vector<RawTerm> operator_terms;
  std::vector<double> center;

  std::string points_path;  // CSV of stencil nodes
  std::string out_base;     // output basename, empty = stdout only

  int q_override = -1;
  double mu_override = -1.0;

  stencilcert::SeminormMode seminorm_mode = stencilcert::SeminormMode::automatic;
  int seminorm_samples = 4096;
  std::uint64_t seed = stencilcert::kDefaultSeed;

  bool direct_route = false;
  int direct_q = -1;

  std::string function = "sinusoid";  // converge test function
  std::vector<double> levels;         // converge scale factors
};

// Parses and validates the file.  Throws stencilcert::error with a
// line-oriented message on any structural problem.
RunConfig load_config(const std::string& path);

// Assembles the stencil problem from a loaded config.  Requires kernel,
// operator, center and a points file.
stencilcert::StencilProblem build_problem(const RunConfig& cfg);

}  // namespace sctool

#endif
