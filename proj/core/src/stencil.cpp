#include "stencilcert/stencil.hpp"

#include <lapacke.h>

#include <cmath>

#include "stencilcert/errors.hpp"

namespace stencilcert {

void StencilProblem::validate() const {
  points.validate();
  int d = points.dimension();
  if (op.dim() != d) throw error("operator dimension does not match point set");
  if (s < kernel.smoothness().s_min)
    throw error("polynomial block order s is below the kernel's minimal order");
  if (s != kernel.cpd_order())
    throw error("problem order s disagrees with the kernel spec order");
  int k = op.order();
  switch (kernel.family()) {
    case KernelFamily::polyharmonic:
      if (!(kernel.nu() > 2.0 * k))
        throw error("polyharmonic exponent must exceed twice the operator order");
      break;
    case KernelFamily::thin_plate:
      if (kernel.tps_order() < k + 1)
        throw error("thin plate order must be at least operator order + 1");
      break;
    case KernelFamily::wendland:
      if (kernel.wendland_dim() != d)
        throw error("wendland profile dimension does not match point set");
      if (kernel.wendland_order() < k)
        throw error("wendland smoothness must be at least the operator order");
      break;
  }
}

SaddleSystem assemble_saddle(const StencilProblem& problem) {
  problem.validate();
  const PointSet& ps = problem.points;
  const int N = ps.size();
  PolyBasis basis = problem.basis();
  const int M = basis.size();

  SaddleSystem sys;
  sys.K.resize(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = kernel_value(problem.kernel, ps.nodes[i], ps.nodes[j]);
      sys.K(i, j) = v;
      sys.K(j, i) = v;
    }
  }
  sys.V = vandermonde(basis, ps.nodes);
  sys.rhs_k.resize(N);
  for (int i = 0; i < N; ++i)
    sys.rhs_k(i) =
        operator_apply_kernel(problem.kernel, problem.op, ps.center, ps.nodes[i]);
  sys.rhs_p = operator_moments(basis, problem.op);
  return sys;
}

namespace {

struct ConsistencySolve {
  Vector w0;        // minimum-norm particular solution of V'w = b
  double residual;  // ||V' w0 - b||
  int rank;         // rank of V'
  int worst;        // most violated moment index
  bool consistent;
};

ConsistencySolve moment_system_solve(const Matrix& V, const Vector& b) {
  ConsistencySolve out;
  const int N = static_cast<int>(V.rows());
  if (V.cols() == 0) {
    out.w0 = Vector::Zero(N);
    out.residual = 0.0;
    out.rank = 0;
    out.worst = -1;
    out.consistent = true;
    return out;
  }
  Matrix Vt = V.transpose();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Vt);
  out.rank = static_cast<int>(cod.rank());
  out.w0 = cod.solve(b);
  Vector res = Vt * out.w0 - b;
  out.residual = res.norm();
  res.cwiseAbs().maxCoeff(&out.worst);

  // Rank comparison under the same orthogonal factorization.
  Matrix augmented(Vt.rows(), Vt.cols() + 1);
  augmented << Vt, b;
  Eigen::ColPivHouseholderQR<Matrix> qr_aug(augmented);
  bool rank_match = qr_aug.rank() == out.rank;
  bool residual_ok = out.residual <= 1e-8 * (1.0 + b.norm());
  out.consistent = rank_match && residual_ok;
  return out;
}

// Pivoted LDL' (Bunch-Kaufman) on the full saddle matrix.  Reports
// failure instead of throwing so the caller can fall back.
bool try_symmetric_indefinite(const Matrix& kkt, const Vector& rhs,
                              Vector& sol, double& rcond) {
  const lapack_int n = static_cast<lapack_int>(kkt.rows());
  Matrix a = kkt;
  Vector b = rhs;
  std::vector<lapack_int> ipiv(n);
  double anorm = kkt.cwiseAbs().rowwise().sum().maxCoeff();
  lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n,
                                   ipiv.data());
  if (info != 0) return false;
  info = LAPACKE_dsycon(LAPACK_COL_MAJOR, 'L', n, a.data(), n, ipiv.data(),
                        anorm, &rcond);
  if (info != 0 || !(rcond > 1e-12)) return false;
  info = LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, 1, a.data(), n, ipiv.data(),
                        b.data(), n);
  if (info != 0) return false;
  sol = b;
  return true;
}

}  // namespace

ConsistencyReport check_consistency(const StencilProblem& problem) {
  SaddleSystem sys = assemble_saddle(problem);
  ConsistencySolve cs = moment_system_solve(sys.V, sys.rhs_p);
  ConsistencyReport rep;
  rep.consistent = cs.consistent;
  rep.residual = cs.residual;
  rep.rank_v = cs.rank;
  rep.worst_moment = cs.worst;
  rep.worst_moment_name =
      cs.worst >= 0 ? problem.basis().members[cs.worst].to_string() : "";
  return rep;
}

StencilResult solve_saddle(const SaddleSystem& sys) {
  const int N = static_cast<int>(sys.K.rows());
  const int M = static_cast<int>(sys.V.cols());

  ConsistencySolve cs = moment_system_solve(sys.V, sys.rhs_p);
  if (!cs.consistent) {
    std::string which = cs.worst >= 0 ? std::to_string(cs.worst) : "?";
    throw inconsistent_moment_system(
        "moment system has no solution; worst violation at moment index " +
            which,
        cs.residual, cs.worst);
  }

  StencilResult out;
  out.diagnostics.vandermonde_rank = cs.rank;
  out.diagnostics.consistency_residual = cs.residual;

  // Primary route: pivoted symmetric-indefinite factorization of the
  // full saddle matrix.  Singular systems (deficient V) land in the
  // fallback below.
  if (N + M > 0) {
    Matrix kkt = Matrix::Zero(N + M, N + M);
    kkt.topLeftCorner(N, N) = sys.K;
    if (M > 0) {
      kkt.topRightCorner(N, M) = sys.V;
      kkt.bottomLeftCorner(M, N) = sys.V.transpose();
    }
    Vector rhs(N + M);
    rhs.head(N) = sys.rhs_k;
    rhs.tail(M) = sys.rhs_p;

    Vector sol;
    double rcond = 0.0;
    if (try_symmetric_indefinite(kkt, rhs, sol, rcond)) {
      double resid = (kkt * sol - rhs).norm();
      if (resid <= 1e-6 * (1.0 + rhs.norm())) {
        out.weights = sol.head(N);
        out.aux = sol.tail(M);
        out.diagnostics.condition_estimate = 1.0 / rcond;
        out.diagnostics.solver = "symmetric-indefinite";
        return out;
      }
    }
  }

  // Fallback: orthogonal-projection (nullspace) method.  Restricting the
  // kernel block to the nullspace of V' gives a positive definite system
  // whose solution fixes the unique weights; v is recovered afterwards in
  // the minimum-norm least-squares sense.
  Matrix Z;
  if (M > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(sys.V);
    Matrix Q = qr.householderQ();
    Z = Q.rightCols(N - cs.rank);
  } else {
    Z = Matrix::Identity(N, N);
  }

  Vector w = cs.w0;
  double cond = 1.0;
  if (Z.cols() > 0) {
    Matrix reduced = Z.transpose() * sys.K * Z;
    reduced = 0.5 * (reduced + reduced.transpose());
    Vector rhs_u = Z.transpose() * (sys.rhs_k - sys.K * cs.w0);
    Eigen::LDLT<Matrix> ldlt(reduced);
    Vector dvec = ldlt.vectorD();
    double dmax = dvec.cwiseAbs().maxCoeff();
    double dmin = dvec.cwiseAbs().minCoeff();
    if (ldlt.info() != Eigen::Success || dvec.minCoeff() <= 0.0 ||
        dmin <= 1e-14 * dmax)
      throw singular_saddle_system(
          "kernel block is numerically singular on the polynomial nullspace");
    Vector u = ldlt.solve(rhs_u);
    double resid_u = (reduced * u - rhs_u).norm();
    if (resid_u > 1e-6 * (1.0 + rhs_u.norm()))
      throw singular_saddle_system("reduced kernel solve failed to converge");
    w += Z * u;
    cond = dmax / dmin;
  }

  Vector v;
  double resid_v = 0.0;
  if (M > 0) {
    Vector target = sys.rhs_k - sys.K * w;
    Eigen::CompleteOrthogonalDecomposition<Matrix> codV(sys.V);
    v = codV.solve(target);
    resid_v = (sys.V * v - target).norm();
  } else {
    v = Vector();
    resid_v = (sys.K * w - sys.rhs_k).norm();
  }
  double scale = 1.0 + sys.rhs_k.norm() +
                 (N > 0 ? sys.K.cwiseAbs().maxCoeff() * w.norm() : 0.0);
  if (resid_v > 1e-6 * scale)
    throw singular_saddle_system(
        "saddle system residual too large; weights are not reliable");

  out.weights = w;
  out.aux = v;
  out.diagnostics.condition_estimate = cond;
  out.diagnostics.solver = "nullspace";
  return out;
}

StencilResult compute_weights(const StencilProblem& problem) {
  problem.validate();
  if (problem.points.has_duplicate_nodes())
    throw singular_saddle_system(
        "duplicate nodes make the saddle system singular");
  SaddleSystem sys = assemble_saddle(problem);
  StencilResult out = solve_saddle(sys);
  out.diagnostics.duplicate_nodes = false;
  return out;
}

double apply_stencil(const Vector& weights, const Vector& values) {
  if (weights.size() != values.size())
    throw error("stencil weights and values have different lengths");
  return weights.dot(values);
}

}  // namespace stencilcert
