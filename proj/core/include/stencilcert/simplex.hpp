#ifndef STENCILCERT_SIMPLEX_HPP
#define STENCILCERT_SIMPLEX_HPP

#include "stencilcert/geometry.hpp"

namespace stencilcert {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status;
  double objective;  // c'x at the optimum (0 when not optimal)
  Vector x;          // primal solution (empty when not optimal)
  int iterations;
};

/**
 * Dense two-phase primal simplex for
 *     min c'x   subject to   A x = b,  x >= 0.
 *
 * Pivoting uses Bland's rule (smallest eligible index in, smallest basic
 * index among ratio ties out), which cannot cycle, so degenerate
 * instances such as zero-cost columns terminate.  Rows are equilibrated
 * before phase 1.  Intended for the small dense programs built by the
 * growth-function module; no effort is made to be fast on large inputs.
 */
LpResult solve_standard_form(const Matrix& A, const Vector& b, const Vector& c,
                             double tol = 1e-9);

}  // namespace stencilcert

#endif
