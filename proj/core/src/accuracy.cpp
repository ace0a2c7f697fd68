#include "stencilcert/accuracy.hpp"

#include <cmath>
#include <cstdio>

#include "stencilcert/errors.hpp"

namespace stencilcert {

namespace {

/**
 * d^alpha (x - c)^beta evaluated at z.  Zero unless beta >= alpha
 * componentwise; otherwise prod_i beta_i!/(beta_i-alpha_i)! times the
 * remaining monomial.
 */
double monomial_partial(const MultiIndex& beta, const MultiIndex& alpha,
                        const Point& z, const Point& c) {
  double factor = 1.0;
  double mono = 1.0;
  for (int i = 0; i < beta.dim(); ++i) {
    const int b = beta[i];
    const int a = alpha[i];
    if (a > b) return 0.0;
    for (int k = b; k > b - a; --k) factor *= k;
    for (int k = 0; k < b - a; ++k) mono *= z[i] - c[i];
  }
  return factor * mono;
}

void check_polynomial_exactness(const SaddleSystem& sys, const Vector& w) {
  if (sys.V.cols() == 0) return;
  const Vector resid = sys.V.transpose() * w - sys.rhs_p;
  const double rnorm = resid.norm();
  const double tol = 1e-8 * (1.0 + sys.rhs_p.norm());
  if (rnorm > tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "weights violate polynomial exactness: moment residual "
                  "%.3e exceeds %.3e",
                  rnorm, tol);
    throw error(buf);
  }
}

}  // namespace

double quadratic_form(const StencilProblem& problem, const Vector& w) {
  problem.validate();
  if (w.size() != problem.points.size())
    throw error("quadratic_form: weight count does not match node count");
  const SaddleSystem sys = assemble_saddle(problem);
  check_polynomial_exactness(sys, w);
  const double ddk =
      operator_apply_both(problem.kernel, problem.op, problem.points.center);
  return ddk - 2.0 * w.dot(sys.rhs_k) + w.dot(sys.K * w);
}

PowerReport power_function(const StencilProblem& problem) {
  return power_function(problem, compute_weights(problem));
}

PowerReport power_function(const StencilProblem& problem,
                           const StencilResult& result) {
  problem.validate();
  const SaddleSystem sys = assemble_saddle(problem);
  const Vector& w = result.weights;
  if (w.size() != problem.points.size())
    throw error("power_function: weight count does not match node count");
  const int m = static_cast<int>(sys.V.cols());
  if (m > 0 && result.aux.size() != m)
    throw error("power_function: auxiliary multiplier vector has wrong size");
  check_polynomial_exactness(sys, w);

  const double ddk =
      operator_apply_both(problem.kernel, problem.op, problem.points.center);
  PowerReport report;
  report.q_wstar = ddk - 2.0 * w.dot(sys.rhs_k) + w.dot(sys.K * w);
  report.shortcut_literal = ddk - w.dot(sys.rhs_k);
  report.shortcut = report.shortcut_literal;
  if (m > 0) report.shortcut -= result.aux.dot(sys.rhs_p);
  report.gap = std::abs(report.q_wstar - report.shortcut);
  report.p = std::sqrt(std::max(report.q_wstar, 0.0));
  return report;
}

double NativeTestFunction::value(const Point& x) const {
  if (x.size() != centers.front().size())
    throw error("test function evaluated at a point of wrong dimension");
  double out = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    out += a[static_cast<int>(i)] * kernel_value(kernel, x, centers[i]);
  for (int j = 0; j < poly_coeffs.size(); ++j)
    out += poly_coeffs[j] * poly.evaluate(j, x);
  return out;
}

double NativeTestFunction::apply_operator(const DiffOperator& op,
                                          const Point& z) const {
  double out = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    out += a[static_cast<int>(i)] *
           operator_apply_kernel(kernel, op, z, centers[i]);
  for (int j = 0; j < poly_coeffs.size(); ++j) {
    double dp = 0.0;
    for (const auto& [alpha, coeff] : op.terms())
      dp += coeff * monomial_partial(poly.members[j], alpha, z, poly.center);
    out += poly_coeffs[j] * dp;
  }
  return out;
}

NativeTestFunction make_native_test_function(const KernelSpec& kernel, int s,
                                             const Point& center,
                                             const std::vector<Point>& centers,
                                             const Vector& a,
                                             const Vector& poly_coeffs) {
  if (centers.empty()) throw error("test function needs at least one center");
  const int dim = static_cast<int>(centers.front().size());
  for (const Point& y : centers)
    if (y.size() != dim)
      throw error("test function centers have mixed dimensions");
  if (center.size() != dim)
    throw error("test function basis center has wrong dimension");
  if (a.size() != static_cast<int>(centers.size()))
    throw error("test function coefficient count does not match centers");
  if (s != kernel.cpd_order())
    throw error(
        "test function polynomial order must match the kernel's order");

  PolyBasis basis(dim, s, center);
  if (poly_coeffs.size() != 0 && poly_coeffs.size() != basis.size())
    throw error("polynomial coefficient count does not match the basis");

  if (basis.size() > 0) {
    const Matrix v = vandermonde(basis, centers);
    const double resid = (v.transpose() * a).cwiseAbs().maxCoeff();
    const double scale =
        1.0 + v.cwiseAbs().maxCoeff() * a.cwiseAbs().sum();
    if (resid > 1e-10 * scale) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "coefficients do not annihilate the polynomial block "
                    "(residual %.3e)",
                    resid);
      throw error(buf);
    }
  }

  const int n = static_cast<int>(centers.size());
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i) {
    gram(i, i) = kernel_value(kernel, centers[i], centers[i]);
    for (int j = i + 1; j < n; ++j) {
      gram(i, j) = kernel_value(kernel, centers[i], centers[j]);
      gram(j, i) = gram(i, j);
    }
  }
  const double sq = a.dot(gram * a);

  NativeTestFunction f{kernel, s,           centers,
                       a,      basis,       poly_coeffs,
                       std::sqrt(std::max(sq, 0.0))};
  return f;
}

ErrorCheck differentiation_error(const StencilProblem& problem,
                                 const NativeTestFunction& f) {
  return differentiation_error(problem, compute_weights(problem), f);
}

ErrorCheck differentiation_error(const StencilProblem& problem,
                                 const StencilResult& result,
                                 const NativeTestFunction& f) {
  if (f.kernel.describe() != problem.kernel.describe())
    throw error("test function lives in the native space of " +
                f.kernel.describe() + " but the stencil uses " +
                problem.kernel.describe());
  const double exact = f.apply_operator(problem.op, problem.points.center);
  Vector values(problem.points.size());
  for (int j = 0; j < problem.points.size(); ++j)
    values[j] = f.value(problem.points.nodes[j]);
  const double approx = apply_stencil(result.weights, values);
  const PowerReport power = power_function(problem, result);
  return ErrorCheck{std::abs(exact - approx), power.p * f.norm_k};
}

}  // namespace stencilcert
