#ifndef STENCILCERT_POLYSPACE_HPP
#define STENCILCERT_POLYSPACE_HPP

#include <vector>

#include "stencilcert/geometry.hpp"
#include "stencilcert/kernels.hpp"

namespace stencilcert {

/**
 * Dimension of the space of d-variate polynomials of total degree < q
 * (degree at most q-1): binomial(d+q-1, d).  q <= 0 gives the trivial
 * space of dimension 0.
 */
int poly_dim(int dim, int q);

/**
 * Monomial basis of polynomials of degree <= q-1 centered at a point:
 * members (x - center)^alpha in graded-lex order.
 */
struct PolyBasis {
  PolyBasis(int dim, int q, Point center);

  int dim;
  int q;          // degree strictly below q
  Point center;
  std::vector<MultiIndex> members;

  int size() const { return static_cast<int>(members.size()); }

  /** Evaluate basis member i at x. */
  double evaluate(int i, const Point& x) const;
};

/** N x M collocation matrix V(j,i) = p_i(x_j). */
Matrix vandermonde(const PolyBasis& basis, const std::vector<Point>& nodes);

/**
 * Vector of Dp_i(center) over the basis: for a constant-coefficient
 * operator, d^beta (x-z)^alpha at z equals alpha! when beta = alpha and 0
 * otherwise, so the moment of member alpha is (operator coefficient of
 * alpha) * alpha!.
 */
Vector operator_moments(const PolyBasis& basis, const DiffOperator& op);

}  // namespace stencilcert

#endif
