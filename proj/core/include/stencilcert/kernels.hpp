#ifndef STENCILCERT_KERNELS_HPP
#define STENCILCERT_KERNELS_HPP

#include <utility>
#include <vector>

#include "stencilcert/geometry.hpp"

namespace stencilcert {

enum class KernelFamily { polyharmonic, thin_plate, wendland };

/**
 * Smoothness record of the translation kernel profile: Phi is r times
 * continuously differentiable with r-th derivatives Hoelder continuous of
 * exponent gamma, and the kernel is conditionally positive definite of
 * every order >= s_min.
 */
struct Smoothness {
  int r;
  double gamma;
  int s_min;
};

/**
 * A radial kernel K(x,y) = Phi(x-y), Phi(u) = phi(||u||), from one of three
 * families:
 *
 *   polyharmonic  Phi = (-1)^ceil(nu/2) ||u||^nu,          nu > 0, not even
 *   thin plate    Phi = (-1)^(n+1) ||u||^(2n) log ||u||,   n >= 1
 *   wendland      Phi = phi_{d,n}(||u||),                  compact support 1
 *
 * Each spec also carries the order s of the polynomial block it is used
 * with; s must be at least the family's minimal order.
 */
class KernelSpec {
 public:
  /** nu > 0, nu not an even integer; s defaults to ceil(nu/2). */
  static KernelSpec polyharmonic(double nu, int s = -1);
  /**
   * n >= 1; s defaults to n + 1.  gamma in (0,1) selects the Hoelder
   * exponent used for smoothness bookkeeping (Phi is C^{2n-1,g} for every
   * g < 1; no best exponent exists, so one is pinned here).
   */
  static KernelSpec thin_plate(int n, int s = -1, double gamma = 0.9);
  /**
   * Wendland function phi_{dim,n} with support radius 1, dim <= 3,
   * n in {0,1,2}; positive definite, so s defaults to 0.
   */
  static KernelSpec wendland(int dim, int n, int s = 0);

  KernelFamily family() const { return family_; }
  double nu() const { return nu_; }       // polyharmonic exponent
  int tps_order() const { return n_; }    // thin plate n
  int wendland_order() const { return n_; }
  int wendland_dim() const { return dim_; }
  int cpd_order() const { return s_; }    // polynomial block order s
  Smoothness smoothness() const { return smooth_; }

  /** Dense coefficients of the Wendland profile polynomial on [0,1]. */
  const std::vector<double>& profile_coefficients() const { return coeffs_; }

  /** Descriptive name such as "phs(nu=3)" for reports and messages. */
  std::string describe() const;

 private:
  KernelSpec() = default;
  KernelFamily family_ = KernelFamily::polyharmonic;
  double nu_ = 0.0;
  int n_ = 0;
  int dim_ = 0;
  int s_ = 0;
  Smoothness smooth_{0, 0.0, 0};
  std::vector<double> coeffs_;  // wendland only
};

/**
 * Iterated radial derivative g_j = ((1/rho) d/drho)^j phi evaluated at the
 * given radius.  At radius 0 the limit value is returned for orders where
 * the product with the accompanying monomial factors stays finite.
 * Throws smoothness_error when 2j > r+1 for the family.
 */
double radial_profile_derivative(const KernelSpec& kernel, int j, double radius);

/**
 * Mixed partial derivative of the kernel,
 *   d^{alpha,beta} K(x,y) = (-1)^{|beta|} (d^{alpha+beta} Phi)(x-y).
 * Total orders up to 4 are supported.  Coincident arguments are allowed
 * only while the derivative extends continuously there; otherwise a
 * smoothness_error is thrown.
 */
double kernel_partial(const KernelSpec& kernel, const MultiIndex& alpha,
                      const MultiIndex& beta, const Point& x, const Point& y);

/** K(x,y) itself. */
double kernel_value(const KernelSpec& kernel, const Point& x, const Point& y);

/**
 * A linear differential operator D = sum_alpha a_alpha d^alpha with
 * constant coefficients.  Operators of order up to 2 are the intended
 * range; anything the derivative engine supports will work.
 */
class DiffOperator {
 public:
  using Term = std::pair<MultiIndex, double>;

  DiffOperator(int dim, std::vector<Term> terms);

  static DiffOperator identity(int dim);
  static DiffOperator partial(int dim, int axis, int order = 1);
  static DiffOperator laplacian(int dim);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  /** Highest derivative order among terms with nonzero coefficient. */
  int order() const;
  /** True if every term with nonzero coefficient has order exactly order(). */
  bool homogeneous() const;

  /** Apply to a smooth function given its partials at a point. */
  double apply(const std::vector<std::pair<MultiIndex, double>>& partials) const;

 private:
  int dim_;
  std::vector<Term> terms_;
};

/** D applied to K(.,y) in the first argument, evaluated at z: D'K(z,y). */
double operator_apply_kernel(const KernelSpec& kernel, const DiffOperator& op,
                             const Point& z, const Point& y);

/** D applied in both arguments at the same point: D'D''K(z,z). */
double operator_apply_both(const KernelSpec& kernel, const DiffOperator& op,
                           const Point& z);

}  // namespace stencilcert

#endif
