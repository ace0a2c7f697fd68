#ifndef STENCILCERT_GROWTH_HPP
#define STENCILCERT_GROWTH_HPP

#include <optional>

#include "stencilcert/geometry.hpp"
#include "stencilcert/kernels.hpp"

namespace stencilcert {

enum class GrowthStatus { finite, infeasible_dual, unbounded_primal };

/**
 * Value of the growth function rho_{q,D}(z, X, mu) together with the
 * route that produced it.  An infinite value is reported with the status
 * of the failing route; primal unboundedness and dual infeasibility are
 * the same phenomenon seen from the two sides.
 */
struct GrowthResult {
  double value = 0.0;  // +infinity when not finite
  GrowthStatus status = GrowthStatus::finite;
  int q = 0;
  double mu = 0.0;
  /** Dual route: weights w with V'w = moments minimizing the cost. */
  std::optional<Vector> dual_weights;
  /** Primal route: coefficients of the extremal polynomial over the basis. */
  std::optional<Vector> primal_poly;

  bool finite() const { return status == GrowthStatus::finite; }
};

/**
 * Dual route:  inf sum_j |w_j| ||x_j - z||^mu  over weights reproducing
 * the operator moments on polynomials of degree < q.  Solved as a linear
 * program by splitting w into positive and negative parts.  Infeasible
 * moment systems give +infinity with status infeasible_dual.
 */
GrowthResult growth_dual(const Point& z, const std::vector<Point>& nodes,
                         int q, const DiffOperator& op, double mu);

/**
 * Primal route:  sup Dp(z)  over polynomials of degree < q with
 * |p(x_j)| <= ||x_j - z||^mu.  Always feasible (p = 0); an unbounded
 * supremum gives +infinity with status unbounded_primal.  By linear
 * programming duality the two routes agree whenever either is finite.
 */
GrowthResult growth_primal(const Point& z, const std::vector<Point>& nodes,
                           int q, const DiffOperator& op, double mu);

/**
 * Cheap upper bound: the cost of the minimum-norm solution of the moment
 * system.  Feasible but not optimal, so it dominates the dual value.
 * Throws inconsistent_moment_system when no solution exists.
 */
double growth_ls_upper(const Point& z, const std::vector<Point>& nodes, int q,
                       const DiffOperator& op, double mu);

}  // namespace stencilcert

#endif
