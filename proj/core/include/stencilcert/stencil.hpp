#ifndef STENCILCERT_STENCIL_HPP
#define STENCILCERT_STENCIL_HPP

#include <string>

#include "stencilcert/geometry.hpp"
#include "stencilcert/kernels.hpp"
#include "stencilcert/polyspace.hpp"

namespace stencilcert {

/**
 * One numerical differentiation problem: approximate D f(z) by a weighted
 * sum of values on the nodes, with kernel K and a polynomial block of
 * order s (exactness on all polynomials of degree < s).
 */
struct StencilProblem {
  KernelSpec kernel;
  DiffOperator op;
  PointSet points;
  int s;  // polynomial block order; must be >= kernel.cpd_order() minimum

  int dimension() const { return points.dimension(); }
  PolyBasis basis() const { return PolyBasis(dimension(), s, points.center); }

  /** Throws on dimension mismatches or family/operator incompatibility. */
  void validate() const;
};

struct ConsistencyReport {
  bool consistent;
  double residual;       // distance from the moment vector to range(V')
  int rank_v;            // rank of the collocation matrix
  int worst_moment;      // index of the most violated moment equation
  std::string worst_moment_name;
};

/**
 * Whether the polynomial moment system V'w = Dp(z) is solvable, decided
 * by comparing rank(V') against rank([V' | b]) under a rank-revealing QR
 * and by the least-squares residual against 1e-8 (1 + ||b||).
 */
ConsistencyReport check_consistency(const StencilProblem& problem);

struct StencilDiagnostics {
  int vandermonde_rank = 0;
  double consistency_residual = 0.0;
  double condition_estimate = 0.0;  // rough estimate of the solve conditioning
  bool duplicate_nodes = false;
  std::string solver;  // "symmetric-indefinite" or "nullspace"
};

struct StencilResult {
  Vector weights;  // w*, unique
  Vector aux;      // one valid polynomial multiplier vector v (may be non-unique)
  StencilDiagnostics diagnostics;
};

/**
 * Solve the saddle system
 *     [ K  V ] [w]   [D'K(z,x_i)]
 *     [ V' 0 ] [v] = [Dp_i(z)   ]
 * for the stencil weights.  A pivoted symmetric-indefinite factorization
 * of the full system is tried first; if it reports (near) singularity,
 * for instance because the node set is deficient and V has a rank drop,
 * the solve falls back to the orthogonal-projection method on the
 * nullspace of V', where the weights are still unique.  The v block is
 * then the minimum-norm least-squares multiplier.
 *
 * Throws inconsistent_moment_system when the moment equations have no
 * solution and singular_saddle_system when the weights are not
 * determined (duplicate nodes, degenerate kernel block).
 */
StencilResult compute_weights(const StencilProblem& problem);

/** Assembled saddle blocks, exposed for diagnostics and testing. */
struct SaddleSystem {
  Matrix K;      // N x N kernel block
  Matrix V;      // N x M polynomial block
  Vector rhs_k;  // D'K(z, x_i)
  Vector rhs_p;  // Dp_i(z)
};

SaddleSystem assemble_saddle(const StencilProblem& problem);

/** Solve pre-assembled blocks; used for basis-independence checks. */
StencilResult solve_saddle(const SaddleSystem& sys);

/** sum_j w_j f(x_j); throws on length mismatch. */
double apply_stencil(const Vector& weights, const Vector& values);

}  // namespace stencilcert

#endif
