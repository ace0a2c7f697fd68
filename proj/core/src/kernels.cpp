#include "stencilcert/kernels.hpp"

#include <cmath>
#include <map>

#include "stencilcert/errors.hpp"

namespace stencilcert {

namespace {

bool is_even_integer(double x) {
  double r = std::round(x / 2.0);
  return x == 2.0 * r;
}

std::vector<double> poly_multiply(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Coefficients of (1-r)^p.
std::vector<double> one_minus_r_power(int p) {
  std::vector<double> c(p + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= p; ++k) {
    c[k] = (k % 2 ? -binom : binom);
    binom = binom * (p - k) / (k + 1);
  }
  return c;
}

// Standard Wendland profiles with minimal integer coefficients,
// l = floor(d/2) + n + 1.  Any positive scaling is equally valid.
std::vector<double> wendland_profile(int dim, int n) {
  int l = dim / 2 + n + 1;
  switch (n) {
    case 0:
      return one_minus_r_power(l);
    case 1:
      return poly_multiply(one_minus_r_power(l + 1),
                           {1.0, double(l + 1)});
    case 2:
      return poly_multiply(
          one_minus_r_power(l + 2),
          {3.0, double(3 * l + 6), double(l * l + 4 * l + 3)});
    default:
      throw error("wendland smoothness parameter must be 0, 1 or 2");
  }
}

double phs_sign(double nu) {
  return (static_cast<long>(std::ceil(nu / 2.0)) % 2) ? -1.0 : 1.0;
}

double tps_sign(int n) { return (n % 2) ? 1.0 : -1.0; }  // (-1)^(n+1)

}  // namespace

KernelSpec KernelSpec::polyharmonic(double nu, int s) {
  if (!(nu > 0.0) || is_even_integer(nu))
    throw error("polyharmonic exponent must be positive and not an even integer");
  int s_min = static_cast<int>(std::ceil(nu / 2.0));
  if (s < 0) s = s_min;
  if (s < s_min)
    throw error("polyharmonic kernel needs polynomial order s >= ceil(nu/2)");
  KernelSpec k;
  k.family_ = KernelFamily::polyharmonic;
  k.nu_ = nu;
  k.s_ = s;
  int r = static_cast<int>(std::ceil(nu)) - 1;
  k.smooth_ = Smoothness{r, nu - r, s_min};
  return k;
}

KernelSpec KernelSpec::thin_plate(int n, int s, double gamma) {
  if (n < 1) throw error("thin plate order n must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw error("thin plate Hoelder exponent must lie in (0,1)");
  int s_min = n + 1;
  if (s < 0) s = s_min;
  if (s < s_min) throw error("thin plate kernel needs s >= n + 1");
  KernelSpec k;
  k.family_ = KernelFamily::thin_plate;
  k.n_ = n;
  k.s_ = s;
  k.smooth_ = Smoothness{2 * n - 1, gamma, s_min};
  return k;
}

KernelSpec KernelSpec::wendland(int dim, int n, int s) {
  if (dim < 1 || dim > 3)
    throw error("wendland profiles implemented for dimensions 1..3");
  if (n < 0 || n > 2) throw error("wendland smoothness parameter n must be 0, 1 or 2");
  if (s < 0) s = 0;
  KernelSpec k;
  k.family_ = KernelFamily::wendland;
  k.n_ = n;
  k.dim_ = dim;
  k.s_ = s;
  k.smooth_ = Smoothness{2 * n, 1.0, 0};
  k.coeffs_ = wendland_profile(dim, n);
  return k;
}

std::string KernelSpec::describe() const {
  switch (family_) {
    case KernelFamily::polyharmonic:
      return "phs(nu=" + std::to_string(nu_) + ")";
    case KernelFamily::thin_plate:
      return "tps(n=" + std::to_string(n_) + ")";
    case KernelFamily::wendland:
      return "wendland(d=" + std::to_string(dim_) + ",n=" + std::to_string(n_) + ")";
  }
  return "?";
}

namespace {

// g_j(rho) for rho > 0, no smoothness guard.
double profile_g(const KernelSpec& k, int j, double rho) {
  switch (k.family()) {
    case KernelFamily::polyharmonic: {
      double c = phs_sign(k.nu());
      for (int i = 0; i < j; ++i) c *= k.nu() - 2.0 * i;
      return c * std::pow(rho, k.nu() - 2.0 * j);
    }
    case KernelFamily::thin_plate: {
      int n = k.tps_order();
      double a = 1.0, b = 0.0;  // g_j = sign (a log rho + b) rho^(2n-2j)
      for (int i = 0; i < j; ++i) {
        double e = 2.0 * (n - i);
        double a2 = e * a;
        double b2 = a + e * b;
        a = a2;
        b = b2;
      }
      return tps_sign(n) * (a * std::log(rho) + b) *
             std::pow(rho, 2.0 * (n - j));
    }
    case KernelFamily::wendland: {
      if (rho >= 1.0) return 0.0;
      const std::vector<double>& c = k.profile_coefficients();
      double v = 0.0;
      for (size_t kk = 0; kk < c.size(); ++kk) {
        if (c[kk] == 0.0) continue;
        double d = 1.0;
        for (int i = 0; i < j; ++i) d *= double(kk) - 2.0 * i;
        if (d == 0.0) continue;
        v += c[kk] * d * std::pow(rho, double(kk) - 2.0 * j);
      }
      return v;
    }
  }
  return 0.0;
}

// rho^(2j-m) g_j(rho): the scale-balanced profile factor that multiplies
// the normalized monomial (u/rho)^beta with |beta| = 2j-m.  Stable for
// tiny rho where g_j alone would overflow.
double profile_g_scaled(const KernelSpec& k, int j, double rho, int m) {
  switch (k.family()) {
    case KernelFamily::polyharmonic: {
      double c = phs_sign(k.nu());
      for (int i = 0; i < j; ++i) c *= k.nu() - 2.0 * i;
      return c * std::pow(rho, k.nu() - m);
    }
    case KernelFamily::thin_plate: {
      int n = k.tps_order();
      double a = 1.0, b = 0.0;
      for (int i = 0; i < j; ++i) {
        double a2 = 2.0 * (n - i) * a;
        double b2 = a + 2.0 * (n - i) * b;
        a = a2;
        b = b2;
      }
      return tps_sign(n) * (a * std::log(rho) + b) *
             std::pow(rho, 2.0 * n - m);
    }
    case KernelFamily::wendland: {
      if (rho >= 1.0) return 0.0;
      const std::vector<double>& c = k.profile_coefficients();
      double v = 0.0;
      for (size_t kk = 0; kk < c.size(); ++kk) {
        if (c[kk] == 0.0) continue;
        double d = 1.0;
        for (int i = 0; i < j; ++i) d *= double(kk) - 2.0 * i;
        if (d == 0.0) continue;
        v += c[kk] * d * std::pow(rho, double(kk) - m);
      }
      return v;
    }
  }
  return 0.0;
}

// Limit of g_j at 0 under the assumption that the caller has already
// verified it is finite for this family and order.
double profile_g_origin(const KernelSpec& k, int j) {
  switch (k.family()) {
    case KernelFamily::polyharmonic:
    case KernelFamily::thin_plate:
      return 0.0;
    case KernelFamily::wendland: {
      const std::vector<double>& c = k.profile_coefficients();
      size_t kk = 2 * static_cast<size_t>(j);
      if (kk >= c.size()) return 0.0;
      double f = 1.0;  // 2^j j! = (2j)(2j-2)...2
      for (int i = 1; i <= j; ++i) f *= 2.0 * i;
      return c[kk] * f;
    }
  }
  return 0.0;
}

struct RadialTerm {
  int j;
  std::vector<int> beta;
  double coeff;
};

// d^alpha Phi(u) = sum coeff * u^beta * g_j(|u|), |beta| = 2j - |alpha|.
// Built by repeated differentiation of x^beta g_j:
//   d_i [x^beta g_j] = beta_i x^(beta-e_i) g_j + x^(beta+e_i) g_(j+1).
std::vector<RadialTerm> radial_terms(const MultiIndex& alpha) {
  int d = alpha.dim();
  std::map<std::pair<int, std::vector<int>>, double> acc;
  acc[{0, std::vector<int>(d, 0)}] = 1.0;
  for (int axis = 0; axis < d; ++axis) {
    for (int rep = 0; rep < alpha[axis]; ++rep) {
      std::map<std::pair<int, std::vector<int>>, double> next;
      for (const auto& [key, c] : acc) {
        const auto& [j, beta] = key;
        if (beta[axis] > 0) {
          std::vector<int> down = beta;
          down[axis] -= 1;
          next[{j, down}] += c * beta[axis];
        }
        std::vector<int> up = beta;
        up[axis] += 1;
        next[{j + 1, up}] += c;
      }
      acc = std::move(next);
    }
  }
  std::vector<RadialTerm> out;
  out.reserve(acc.size());
  for (const auto& [key, c] : acc)
    out.push_back(RadialTerm{key.first, key.second, c});
  return out;
}

// d^alpha Phi evaluated at u = x - y, with family smoothness guards.
double phi_partial(const KernelSpec& k, const MultiIndex& alpha,
                   const Vector& u) {
  int m = alpha.order();
  if (m > 4)
    throw smoothness_error("kernel derivatives are supported up to total order 4");
  if (k.family() == KernelFamily::wendland && m > 2 * k.wendland_order())
    throw smoothness_error("derivative order " + std::to_string(m) +
                           " exceeds smoothness of " + k.describe());
  double rho = u.norm();
  if (rho == 0.0) {
    if (k.family() != KernelFamily::wendland && m > k.smoothness().r)
      throw smoothness_error("derivative of order " + std::to_string(m) +
                             " of " + k.describe() +
                             " has no continuous extension at coincident points");
    if (m % 2 == 1 || k.family() != KernelFamily::wendland) return 0.0;
    // Only the monomial-free term survives at the origin.
    for (const RadialTerm& t : radial_terms(alpha)) {
      bool pure = true;
      for (int b : t.beta) pure = pure && (b == 0);
      if (pure) return t.coeff * profile_g_origin(k, t.j);
    }
    return 0.0;
  }
  Vector w = u / rho;
  double v = 0.0;
  for (const RadialTerm& t : radial_terms(alpha)) {
    double mono = 1.0;
    for (int i = 0; i < alpha.dim(); ++i)
      for (int rep = 0; rep < t.beta[i]; ++rep) mono *= w[i];
    v += t.coeff * mono * profile_g_scaled(k, t.j, rho, m);
  }
  return v;
}

}  // namespace

double radial_profile_derivative(const KernelSpec& kernel, int j, double radius) {
  if (j < 0) throw error("profile derivative order must be nonnegative");
  if (radius < 0.0) throw error("radius must be nonnegative");
  const Smoothness sm = kernel.smoothness();
  if (2 * j > sm.r + 1)
    throw smoothness_error("profile derivative order " + std::to_string(j) +
                           " exceeds smoothness of " + kernel.describe());
  if (radius == 0.0) {
    switch (kernel.family()) {
      case KernelFamily::polyharmonic:
        if (2.0 * j > kernel.nu())
          throw smoothness_error("profile derivative of " + kernel.describe() +
                                 " has no finite limit at radius 0");
        return 0.0;
      case KernelFamily::thin_plate:
        if (j >= kernel.tps_order())
          throw smoothness_error("profile derivative of " + kernel.describe() +
                                 " has no finite limit at radius 0");
        return 0.0;
      case KernelFamily::wendland:
        return profile_g_origin(kernel, j);
    }
  }
  return profile_g(kernel, j, radius);
}

double kernel_partial(const KernelSpec& kernel, const MultiIndex& alpha,
                      const MultiIndex& beta, const Point& x, const Point& y) {
  if (alpha.dim() != beta.dim() || alpha.dim() != x.size() ||
      x.size() != y.size())
    throw error("kernel_partial dimension mismatch");
  double sign = (beta.order() % 2) ? -1.0 : 1.0;
  return sign * phi_partial(kernel, alpha + beta, x - y);
}

double kernel_value(const KernelSpec& kernel, const Point& x, const Point& y) {
  return phi_partial(kernel, MultiIndex::zero(static_cast<int>(x.size())),
                     x - y);
}

DiffOperator::DiffOperator(int dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1) throw error("operator dimension must be positive");
  if (terms_.empty()) throw error("operator must have at least one term");
  bool nonzero = false;
  for (const Term& t : terms_) {
    if (t.first.dim() != dim_)
      throw error("operator term dimension mismatch");
    nonzero = nonzero || t.second != 0.0;
  }
  if (!nonzero) throw error("operator must have a nonzero coefficient");
}

DiffOperator DiffOperator::identity(int dim) {
  return DiffOperator(dim, {{MultiIndex::zero(dim), 1.0}});
}

DiffOperator DiffOperator::partial(int dim, int axis, int order) {
  std::vector<int> e(dim, 0);
  e.at(axis) = order;
  return DiffOperator(dim, {{MultiIndex(std::move(e)), 1.0}});
}

DiffOperator DiffOperator::laplacian(int dim) {
  std::vector<Term> terms;
  for (int i = 0; i < dim; ++i) {
    std::vector<int> e(dim, 0);
    e[i] = 2;
    terms.push_back({MultiIndex(std::move(e)), 1.0});
  }
  return DiffOperator(dim, std::move(terms));
}

int DiffOperator::order() const {
  int k = 0;
  for (const Term& t : terms_)
    if (t.second != 0.0) k = std::max(k, t.first.order());
  return k;
}

bool DiffOperator::homogeneous() const {
  int k = order();
  for (const Term& t : terms_)
    if (t.second != 0.0 && t.first.order() != k) return false;
  return true;
}

double operator_apply_kernel(const KernelSpec& kernel, const DiffOperator& op,
                             const Point& z, const Point& y) {
  double v = 0.0;
  for (const auto& [alpha, a] : op.terms()) {
    if (a == 0.0) continue;
    v += a * phi_partial(kernel, alpha, z - y);
  }
  return v;
}

double operator_apply_both(const KernelSpec& kernel, const DiffOperator& op,
                           const Point& z) {
  Vector origin = Vector::Zero(z.size());
  double v = 0.0;
  for (const auto& [alpha, a] : op.terms()) {
    if (a == 0.0) continue;
    for (const auto& [beta, b] : op.terms()) {
      if (b == 0.0) continue;
      double sign = (beta.order() % 2) ? -1.0 : 1.0;
      v += a * b * sign * phi_partial(kernel, alpha + beta, origin);
    }
  }
  return v;
}

}  // namespace stencilcert
