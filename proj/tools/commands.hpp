#ifndef STENCILCERT_TOOLS_COMMANDS_HPP
#define STENCILCERT_TOOLS_COMMANDS_HPP

#include "config.hpp"

namespace sctool {

// Each command returns the process exit code:
//   0  success
//   1  configuration or I/O problem
//   2  inconsistent moment system (deficient nodes cannot match the operator)
//   3  singular solve
int cmd_weights(const RunConfig& cfg);
int cmd_certify(const RunConfig& cfg);
int cmd_growth(const RunConfig& cfg);
int cmd_converge(const RunConfig& cfg);

}  // namespace sctool

#endif
