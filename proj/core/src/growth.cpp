#include "stencilcert/growth.hpp"

#include <cmath>
#include <limits>

#include "stencilcert/errors.hpp"
#include "stencilcert/polyspace.hpp"
#include "stencilcert/simplex.hpp"

namespace stencilcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector node_costs(const Point& z, const std::vector<Point>& nodes, double mu) {
  Vector c(nodes.size());
  for (size_t j = 0; j < nodes.size(); ++j)
    c[static_cast<Eigen::Index>(j)] = std::pow((nodes[j] - z).norm(), mu);
  return c;
}

void check_inputs(const Point& z, const std::vector<Point>& nodes, int q,
                  double mu) {
  if (nodes.empty()) throw error("growth function needs at least one node");
  for (const Point& x : nodes)
    if (x.size() != z.size()) throw error("node dimension mismatch");
  if (q < 1) throw error("growth order q must be at least 1");
  if (mu < 0.0) throw error("growth exponent mu must be nonnegative");
}

}  // namespace

GrowthResult growth_dual(const Point& z, const std::vector<Point>& nodes,
                         int q, const DiffOperator& op, double mu) {
  check_inputs(z, nodes, q, mu);
  const int N = static_cast<int>(nodes.size());
  PolyBasis basis(static_cast<int>(z.size()), q, z);
  const int M = basis.size();

  GrowthResult out;
  out.q = q;
  out.mu = mu;
  if (M == 0) {
    out.value = 0.0;
    out.dual_weights = Vector::Zero(N);
    return out;
  }

  Matrix Vt = vandermonde(basis, nodes).transpose();  // M x N
  Vector g = operator_moments(basis, op);
  Vector cost = node_costs(z, nodes, mu);

  // Split w = u - v, u,v >= 0: min cost'(u+v) s.t. Vt (u - v) = g.
  Matrix A(M, 2 * N);
  A.leftCols(N) = Vt;
  A.rightCols(N) = -Vt;
  Vector c(2 * N);
  c.head(N) = cost;
  c.tail(N) = cost;

  LpResult lp = solve_standard_form(A, g, c);
  if (lp.status == LpStatus::infeasible) {
    out.value = kInf;
    out.status = GrowthStatus::infeasible_dual;
    return out;
  }
  if (lp.status != LpStatus::optimal)
    throw error("dual growth program cannot be unbounded with nonnegative costs");
  out.value = lp.objective;
  out.dual_weights = Vector(lp.x.head(N) - lp.x.tail(N));
  return out;
}

GrowthResult growth_primal(const Point& z, const std::vector<Point>& nodes,
                           int q, const DiffOperator& op, double mu) {
  check_inputs(z, nodes, q, mu);
  const int N = static_cast<int>(nodes.size());
  PolyBasis basis(static_cast<int>(z.size()), q, z);
  const int M = basis.size();

  GrowthResult out;
  out.q = q;
  out.mu = mu;
  if (M == 0) {
    out.value = 0.0;
    out.primal_poly = Vector();
    return out;
  }

  Matrix V = vandermonde(basis, nodes);  // N x M
  Vector g = operator_moments(basis, op);
  Vector cost = node_costs(z, nodes, mu);

  // max g't  s.t.  -cost <= V t <= cost, with t free.  Standard form via
  // t = tp - tm and slacks on both constraint blocks.
  const int nvar = 2 * M + 2 * N;
  Matrix A = Matrix::Zero(2 * N, nvar);
  A.block(0, 0, N, M) = V;
  A.block(0, M, N, M) = -V;
  A.block(0, 2 * M, N, N) = Matrix::Identity(N, N);
  A.block(N, 0, N, M) = -V;
  A.block(N, M, N, M) = V;
  A.block(N, 2 * M + N, N, N) = Matrix::Identity(N, N);
  Vector b(2 * N);
  b.head(N) = cost;
  b.tail(N) = cost;
  Vector c = Vector::Zero(nvar);
  c.head(M) = -g;
  c.segment(M, M) = g;

  LpResult lp = solve_standard_form(A, b, c);
  if (lp.status == LpStatus::unbounded) {
    out.value = kInf;
    out.status = GrowthStatus::unbounded_primal;
    return out;
  }
  if (lp.status != LpStatus::optimal)
    throw error("primal growth program is always feasible at p = 0");
  out.value = -lp.objective;
  out.primal_poly = Vector(lp.x.head(M) - lp.x.segment(M, M));
  return out;
}

double growth_ls_upper(const Point& z, const std::vector<Point>& nodes, int q,
                       const DiffOperator& op, double mu) {
  check_inputs(z, nodes, q, mu);
  PolyBasis basis(static_cast<int>(z.size()), q, z);
  if (basis.size() == 0) return 0.0;

  Matrix Vt = vandermonde(basis, nodes).transpose();
  Vector g = operator_moments(basis, op);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Vt);
  Vector w = cod.solve(g);
  double residual = (Vt * w - g).norm();
  if (residual > 1e-8 * (1.0 + g.norm())) {
    Vector res = Vt * w - g;
    int worst = 0;
    res.cwiseAbs().maxCoeff(&worst);
    throw inconsistent_moment_system(
        "moment system has no solution; worst violation at basis member " +
            basis.members[worst].to_string(),
        residual, worst);
  }
  return w.cwiseAbs().dot(node_costs(z, nodes, mu));
}

}  // namespace stencilcert
