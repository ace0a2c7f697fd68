#ifndef STENCILCERT_ACCURACY_HPP
#define STENCILCERT_ACCURACY_HPP

#include "stencilcert/stencil.hpp"

namespace stencilcert {

/**
 * Q(w) = D'D''K(z,z) - 2 sum_j w_j D'K(z,x_j) + sum_ij w_i w_j K(x_i,x_j),
 * the squared native-space norm of the error functional of w.  Defined
 * only for weights that are exact on the polynomial block; checked, and
 * violations throw.
 */
double quadratic_form(const StencilProblem& problem, const Vector& w);

/**
 * The power function P and the routes to it.  q_wstar is the full
 * quadratic form at the optimal weights, p = sqrt(max(q_wstar, 0)).
 *
 * shortcut is the cheaper expression
 *     D'D''K(z,z) - sum_j w*_j D'K(z,x_j) - sum_i v_i Dp_i(z),
 * which agrees with q_wstar for every valid multiplier vector v.  The
 * two-term version without the multiplier correction is widely quoted
 * but wrong whenever the multipliers carry weight; it is recorded in
 * shortcut_literal for reference (on the unit-interval midpoint example
 * it gives -0.125 against a true value of 0.25).
 */
struct PowerReport {
  double q_wstar;
  double p;
  double shortcut;
  double shortcut_literal;
  double gap;  // |q_wstar - shortcut|
};

PowerReport power_function(const StencilProblem& problem);
PowerReport power_function(const StencilProblem& problem,
                           const StencilResult& result);

/**
 * A member of the kernel's native space with known norm:
 *     f = sum_i a_i K(., y_i) + p,
 * where the coefficients annihilate polynomials of degree < s on the
 * centers y_i.  Then ||f||^2 = a' [K(y_i,y_j)] a.
 */
struct NativeTestFunction {
  KernelSpec kernel;
  int s = 0;
  std::vector<Point> centers;
  Vector a;
  PolyBasis poly;      // polynomial part over this basis
  Vector poly_coeffs;  // empty means no polynomial part
  double norm_k = 0.0;

  double value(const Point& x) const;
  /** D f(z) evaluated analytically. */
  double apply_operator(const DiffOperator& op, const Point& z) const;
};

/**
 * Validates the moment condition on the coefficients (within 1e-10,
 * scale aware) and computes the native norm.  The polynomial part is
 * given over the degree < s basis centered at `center`.
 */
NativeTestFunction make_native_test_function(const KernelSpec& kernel, int s,
                                             const Point& center,
                                             const std::vector<Point>& centers,
                                             const Vector& a,
                                             const Vector& poly_coeffs);

struct ErrorCheck {
  double error;  // |D f(z) - sum_j w*_j f(x_j)|
  double bound;  // P ||f||
};

/**
 * The certified native-space error bound, evaluated on a concrete test
 * function: error <= bound up to roundoff.
 */
ErrorCheck differentiation_error(const StencilProblem& problem,
                                 const NativeTestFunction& f);
ErrorCheck differentiation_error(const StencilProblem& problem,
                                 const StencilResult& result,
                                 const NativeTestFunction& f);

}  // namespace stencilcert

#endif
