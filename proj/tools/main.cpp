#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "stencilcert/errors.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string points_path;
  std::string out_base;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> levels;
};

void attach(CLI::App* sub, CommonFlags& flags, bool with_levels) {
  sub->add_option("--config", flags.config_path, "JSON run configuration")
      ->required();
  sub->add_option("--points", flags.points_path,
                  "stencil nodes CSV (overrides the config)");
  sub->add_option("--out", flags.out_base,
                  "output basename; reports land in <out>.json etc.");
  sub->add_option("--seed", flags.seed, "sampling seed override")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  if (with_levels)
    sub->add_option("--levels", flags.levels,
                    "comma separated scale factors, coarse to fine")
        ->delimiter(',');
}

sctool::RunConfig load(const CommonFlags& flags) {
  sctool::RunConfig cfg = sctool::load_config(flags.config_path);
  if (!flags.points_path.empty()) cfg.points_path = flags.points_path;
  if (!flags.out_base.empty()) cfg.out_base = flags.out_base;
  if (flags.seed_set) cfg.seed = flags.seed;
  if (!flags.levels.empty()) cfg.levels = flags.levels;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "stencilcert: kernel differentiation stencils with certified error "
      "bounds"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* weights = app.add_subcommand(
      "weights", "solve for stencil weights and diagnostics");
  CLI::App* certify = app.add_subcommand(
      "certify", "weights plus power function, growth function and bound");
  CLI::App* growth = app.add_subcommand(
      "growth", "evaluate the growth function by linear programming");
  CLI::App* converge = app.add_subcommand(
      "converge", "error/bound decay across scaled copies of the stencil");
  attach(weights, flags, false);
  attach(certify, flags, false);
  attach(growth, flags, false);
  attach(converge, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    sctool::RunConfig cfg = load(flags);
    if (weights->parsed()) return sctool::cmd_weights(cfg);
    if (certify->parsed()) return sctool::cmd_certify(cfg);
    if (growth->parsed()) return sctool::cmd_growth(cfg);
    if (converge->parsed()) return sctool::cmd_converge(cfg);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const stencilcert::inconsistent_moment_system& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const stencilcert::singular_saddle_system& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
