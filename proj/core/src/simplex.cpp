#include "stencilcert/simplex.hpp"

#include <cmath>

#include "stencilcert/errors.hpp"

namespace stencilcert {

namespace {

struct Tableau {
  Matrix T;                // m x (n + m): original columns then artificials
  Vector rhs;              // m
  Vector costrow;          // n + m reduced costs
  std::vector<int> basis;  // m basic column indices
  int n;                   // number of original columns
  int iterations = 0;

  int rows() const { return static_cast<int>(T.rows()); }

  void pivot(int pr, int pc) {
    double piv = T(pr, pc);
    T.row(pr) /= piv;
    rhs(pr) /= piv;
    for (int i = 0; i < rows(); ++i) {
      if (i == pr) continue;
      double f = T(i, pc);
      if (f == 0.0) continue;
      T.row(i) -= f * T.row(pr);
      rhs(i) -= f * rhs(pr);
    }
    double f = costrow(pc);
    if (f != 0.0) costrow -= f * T.row(pr);
    basis[pr] = pc;
    ++iterations;
  }

  // Bland's rule: smallest eligible entering index, smallest basic index
  // among ratio-test ties.  Returns optimal / unbounded / iteration.
  enum class Step { optimal, unbounded, pivoted };
  Step step(int max_col, double tol) {
    int pc = -1;
    for (int j = 0; j < max_col; ++j) {
      if (costrow(j) < -tol) {
        pc = j;
        break;
      }
    }
    if (pc < 0) return Step::optimal;
    int pr = -1;
    double best = 0.0;
    for (int i = 0; i < rows(); ++i) {
      if (T(i, pc) <= tol) continue;
      double ratio = rhs(i) / T(i, pc);
      if (pr < 0 || ratio < best - 1e-12 * (1.0 + std::abs(best))) {
        pr = i;
        best = ratio;
      } else if (ratio <= best + 1e-12 * (1.0 + std::abs(best)) &&
                 basis[i] < basis[pr]) {
        pr = i;
        best = ratio;
      }
    }
    if (pr < 0) return Step::unbounded;
    pivot(pr, pc);
    return Step::pivoted;
  }
};

}  // namespace

LpResult solve_standard_form(const Matrix& A, const Vector& b, const Vector& c,
                             double tol) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw error("linear program dimension mismatch");

  Tableau tab;
  tab.n = n;
  tab.T.resize(m, n + m);
  tab.T.leftCols(n) = A;
  tab.T.rightCols(m) = Matrix::Identity(m, m);
  tab.rhs = b;
  tab.basis.resize(m);

  // Row equilibration, then sign flips for a nonnegative right hand side.
  for (int i = 0; i < m; ++i) {
    double s = n > 0 ? tab.T.row(i).head(n).cwiseAbs().maxCoeff() : 0.0;
    if (s > 0.0) {
      tab.T.row(i).head(n) /= s;
      tab.rhs(i) /= s;
    }
    if (tab.rhs(i) < 0.0) {
      tab.T.row(i).head(n) = -tab.T.row(i).head(n);
      tab.rhs(i) = -tab.rhs(i);
    }
    tab.basis[i] = n + i;
  }

  const int max_iter = 2000 * (n + m + 1);

  // Phase 1: minimize the artificial sum.
  tab.costrow = Vector::Zero(n + m);
  for (int i = 0; i < m; ++i) tab.costrow -= tab.T.row(i);
  tab.costrow.tail(m).setZero();
  while (true) {
    if (tab.iterations > max_iter)
      throw error("simplex iteration limit exceeded in phase 1");
    Tableau::Step s = tab.step(n, tol);
    if (s == Tableau::Step::optimal) break;
    if (s == Tableau::Step::unbounded)
      throw error("phase 1 subproblem unbounded (cannot happen)");
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] >= n) infeas += std::abs(tab.rhs(i));
  if (infeas > tol * (1.0 + b.cwiseAbs().sum()))
    return LpResult{LpStatus::infeasible, 0.0, Vector(), tab.iterations};

  // Drive remaining (degenerate) artificials out where a pivot exists;
  // rows without one are redundant and stay parked at zero.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.T(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 over the original columns.
  tab.costrow = Vector::Zero(n + m);
  tab.costrow.head(n) = c;
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n && c(tab.basis[i]) != 0.0)
      tab.costrow -= c(tab.basis[i]) * tab.T.row(i);
  }
  while (true) {
    if (tab.iterations > max_iter)
      throw error("simplex iteration limit exceeded in phase 2");
    Tableau::Step s = tab.step(n, tol);
    if (s == Tableau::Step::optimal) break;
    if (s == Tableau::Step::unbounded)
      return LpResult{LpStatus::unbounded, 0.0, Vector(), tab.iterations};
  }

  Vector x = Vector::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n) x(tab.basis[i]) = std::max(tab.rhs(i), 0.0);
  return LpResult{LpStatus::optimal, c.dot(x), x, tab.iterations};
}

}  // namespace stencilcert
