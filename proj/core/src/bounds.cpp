#include "stencilcert/bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stencilcert/accuracy.hpp"
#include "stencilcert/errors.hpp"

namespace stencilcert {

namespace {

std::vector<MultiIndex> indices_of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  for (const MultiIndex& a : enumerate_multi_indices(dim, order))
    if (a.order() == order) out.push_back(a);
  return out;
}

/* Dense polynomials as ascending coefficient vectors. */

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k)
    d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

double poly_eval(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
  return v;
}

/** Real roots via the companion matrix; near-real eigenvalues accepted. */
std::vector<double> poly_real_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-13 * scale) c.pop_back();
  std::vector<double> roots;
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return roots;
  Matrix companion = Matrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Matrix> es(companion);
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> lam = es.eigenvalues()[i];
    if (std::abs(lam.imag()) <= 1e-8 * (1.0 + std::abs(lam.real())))
      roots.push_back(lam.real());
  }
  return roots;
}

double poly_sup_abs(const std::vector<double>& c, double lo, double hi) {
  double best = std::max(std::abs(poly_eval(c, lo)), std::abs(poly_eval(c, hi)));
  for (double t : poly_real_roots(poly_derivative(c)))
    if (t > lo && t < hi) best = std::max(best, std::abs(poly_eval(c, t)));
  return best;
}

/**
 * Exact |Phi|_{C^{r,gamma}} for the homogeneous profile |t|^nu on the
 * line.  The r-th derivative is c |t|^gamma (even r) or c |t|^gamma
 * sign(t) (odd r) with |c| = nu (nu-1) ... (nu-r+1); the Hölder quotient
 * is maximized by pairs (t, 0) in the even case and antipodal pairs in
 * the odd case, giving an extra factor 2^{1-gamma}.  Radius independent.
 */
double phs_line_seminorm(double nu, int r, double gamma) {
  double c = 1.0;
  for (int i = 0; i < r; ++i) c *= nu - i;
  c = std::abs(c);
  if (r % 2 == 1) c *= std::pow(2.0, 1.0 - gamma);
  return c;
}

/**
 * Exact Wendland seminorm where the problem is one dimensional in
 * nature: sup of |phi^(2n+1)| over [0, min(radius, 1)].  Valid for any
 * supported dimension when n = 0 (the Lipschitz constant of a radial
 * function is sup |phi'|) and for dimension 1 generally.
 */
double wendland_line_seminorm(const KernelSpec& kernel, double radius) {
  std::vector<double> c = kernel.profile_coefficients();
  for (int j = 0; j < 2 * kernel.wendland_order() + 1; ++j)
    c = poly_derivative(c);
  return poly_sup_abs(c, 0.0, std::min(radius, 1.0));
}

bool has_exact_seminorm(const KernelSpec& kernel, int dim) {
  switch (kernel.family()) {
    case KernelFamily::polyharmonic:
      return dim == 1;
    case KernelFamily::wendland:
      return kernel.wendland_order() == 0 || dim == 1;
    case KernelFamily::thin_plate:
      return false;
  }
  return false;
}

double exact_seminorm(const KernelSpec& kernel, int dim, double radius) {
  if (kernel.family() == KernelFamily::polyharmonic && dim == 1)
    return phs_line_seminorm(kernel.nu(), kernel.smoothness().r,
                             kernel.smoothness().gamma);
  return wendland_line_seminorm(kernel, radius);
}

/** Ball sample pairs: structured axis pairs plus accepted Halton draws. */
std::vector<std::pair<Point, Point>> ball_pairs(int dim, double radius,
                                                int samples,
                                                std::uint64_t seed) {
  std::vector<std::pair<Point, Point>> pairs;
  pairs.reserve(static_cast<std::size_t>(samples) + 64);
  // dyadic scales along each axis and the diagonal, paired with the
  // origin and with the antipode; these hit homogeneous suprema exactly
  std::vector<Point> dirs;
  for (int i = 0; i < dim; ++i) {
    Point e = Point::Zero(dim);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  if (dim > 1) dirs.push_back(Point::Constant(dim, 1.0 / std::sqrt(dim)));
  for (const Point& e : dirs)
    for (int j = 0; j < 12; ++j) {
      const double t = radius * std::pow(0.5, j);
      pairs.emplace_back(t * e, Point::Zero(dim));
      pairs.emplace_back(t * e, -t * e);
    }
  HaltonSequence seq(2 * dim, seed);
  int accepted = 0;
  long guard = 0;
  const long guard_cap = 64L * samples + 4096;
  while (accepted < samples && guard < guard_cap) {
    ++guard;
    const Vector u = seq.next();
    Point x(dim), y(dim);
    for (int i = 0; i < dim; ++i) x[i] = radius * (2.0 * u[i] - 1.0);
    for (int i = 0; i < dim; ++i) y[i] = radius * (2.0 * u[dim + i] - 1.0);
    if (x.norm() > radius || y.norm() > radius) continue;
    if ((x - y).norm() <= 1e-12 * radius) continue;
    pairs.emplace_back(std::move(x), std::move(y));
    ++accepted;
  }
  return pairs;
}

}  // namespace

double cdr_constant(int dim, int r, double gamma) {
  if (dim < 1) throw error("cdr_constant: dimension must be positive");
  if (r < 0) throw error("cdr_constant: derivative order must be >= 0");
  if (gamma <= 0.0 || gamma > 1.0)
    throw error("cdr_constant: Hölder exponent must lie in (0,1]");
  const int m = r / 2;
  const double theta = (r % 2 == 0) ? gamma / 2.0 : (1.0 + gamma) / 2.0;
  double den = 1.0;
  for (int i = 1; i <= m; ++i) den *= (theta + i) * (theta + i);
  const double num =
      (r % 2 == 0 ? 2.0 : 1.0) * std::pow(static_cast<double>(dim), 0.5 * r);
  return num / den;
}

double holder_sampled_lower_estimate(const PartialEvaluator& f, int dim,
                                     int r, double gamma, double radius,
                                     int samples, std::uint64_t seed) {
  if (dim < 1) throw error("seminorm sampling: dimension must be positive");
  if (radius <= 0.0) throw error("seminorm ball radius must be positive");
  if (gamma <= 0.0 || gamma > 1.0)
    throw error("Hölder exponent must lie in (0,1]");
  if (samples < 1) throw error("sample count must be positive");

  const auto alphas = indices_of_order(dim, r);
  const auto pairs = ball_pairs(dim, radius, samples, seed);
  double best = 0.0;
  for (const MultiIndex& alpha : alphas)
    for (const auto& [x, y] : pairs) {
      const double q = std::abs(f(alpha, x) - f(alpha, y)) /
                       std::pow((x - y).norm(), gamma);
      best = std::max(best, q);
    }
  return best;
}

HolderEstimate phi_holder_seminorm(const KernelSpec& kernel, int dim,
                                   double radius, SeminormMode mode,
                                   int samples, std::uint64_t seed) {
  if (dim < 1) throw error("seminorm: dimension must be positive");
  if (radius <= 0.0) throw error("seminorm ball radius must be positive");
  if (kernel.family() == KernelFamily::wendland &&
      dim != kernel.wendland_dim())
    throw error("seminorm dimension does not match the kernel dimension");

  const Smoothness sm = kernel.smoothness();
  HolderEstimate est;
  est.r = sm.r;
  est.gamma = sm.gamma;
  est.radius = radius;

  const bool exact_available = has_exact_seminorm(kernel, dim);
  const bool want_exact = mode == SeminormMode::exact_closed_form ||
                          (mode == SeminormMode::automatic && exact_available);
  if (want_exact) {
    if (!exact_available)
      throw error("no exact seminorm closed form for " + kernel.describe() +
                  " in dimension " + std::to_string(dim) +
                  "; use the sampled mode");
    est.mode = SeminormMode::exact_closed_form;
    est.value = exact_seminorm(kernel, dim, radius);
    return est;
  }

  est.mode = SeminormMode::sampled_lower_estimate;
  est.samples = samples;
  est.seed = seed;
  const MultiIndex none = MultiIndex::zero(dim);
  const Point origin = Point::Zero(dim);
  PartialEvaluator f = [&](const MultiIndex& alpha, const Point& x) {
    return kernel_partial(kernel, alpha, none, x, origin);
  };
  est.value = holder_sampled_lower_estimate(f, dim, sm.r, sm.gamma, radius,
                                            samples, seed);
  return est;
}

double mixed_seminorm_sampled(const MixedPartialEvaluator& u,
                              const PointSet& points, int m, double gamma,
                              int samples, std::uint64_t seed) {
  points.validate();
  if (m < 0) throw error("mixed seminorm: derivative order must be >= 0");
  if (gamma <= 0.0 || gamma > 1.0)
    throw error("Hölder exponent must lie in (0,1]");
  if (samples < 1) throw error("sample count must be positive");

  const int dim = points.dimension();
  const int n = points.size();
  const Point& z = points.center;
  const auto alphas = indices_of_order(dim, m);

  std::vector<double> seg_len(n);
  for (int i = 0; i < n; ++i) seg_len[i] = (points.nodes[i] - z).norm();

  // deterministic endpoint pair plus quasi-random parameter draws per
  // segment pair; parameters floored away from z so the difference
  // quotients stay well above roundoff
  const int per_pair = std::max(1, samples / std::max(1, n * n));
  const double tmin = 1e-3;

  struct SamplePair {
    Point x, y;
    double xfac, yfac;  // ||x-z||^gamma, ||y-z||^gamma
  };
  std::vector<SamplePair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * n * (per_pair + 1));
  for (int i = 0; i < n; ++i) {
    if (seg_len[i] <= 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (seg_len[j] <= 0.0) continue;
      HaltonSequence seq(2, seed + static_cast<std::uint64_t>(i) * n + j);
      for (int k = 0; k <= per_pair; ++k) {
        double t = 1.0, s = 1.0;
        if (k > 0) {
          const Vector d = seq.next();
          t = tmin + (1.0 - tmin) * d[0];
          s = tmin + (1.0 - tmin) * d[1];
        }
        SamplePair p;
        p.x = z + t * (points.nodes[i] - z);
        p.y = z + s * (points.nodes[j] - z);
        p.xfac = std::pow(t * seg_len[i], gamma);
        p.yfac = std::pow(s * seg_len[j], gamma);
        pairs.push_back(std::move(p));
      }
    }
  }
  if (pairs.empty()) return 0.0;

  double weighted_sum = 0.0;
  double mfac = 1.0;
  for (int i = 2; i <= m; ++i) mfac *= i;
  for (const MultiIndex& alpha : alphas) {
    const double wa = mfac / alpha.factorial();
    for (const MultiIndex& beta : alphas) {
      const double wb = mfac / beta.factorial();
      const double uzz = u(alpha, beta, z, z);
      double sup = 0.0;
      for (const SamplePair& p : pairs) {
        const double delta = u(alpha, beta, p.x, p.y) -
                             u(alpha, beta, p.x, z) -
                             u(alpha, beta, z, p.y) + uzz;
        sup = std::max(sup, std::abs(delta) / (p.xfac * p.yfac));
      }
      weighted_sum += wa * wb * sup * sup;
    }
  }
  double prefactor = 1.0;
  for (int i = 1; i <= m; ++i) prefactor /= (gamma + i) * (gamma + i);
  return prefactor * std::sqrt(weighted_sum);
}

double mixed_kernel_seminorm_estimate(const KernelSpec& kernel,
                                      const PointSet& points, int m,
                                      double gamma, int samples,
                                      std::uint64_t seed) {
  if (2 * m > kernel.smoothness().r)
    throw smoothness_error(
        "mixed seminorm derivative order exceeds the kernel smoothness");
  MixedPartialEvaluator u = [&kernel](const MultiIndex& alpha,
                                      const MultiIndex& beta, const Point& x,
                                      const Point& y) {
    return kernel_partial(kernel, alpha, beta, x, y);
  };
  return mixed_seminorm_sampled(u, points, m, gamma, samples, seed);
}

BoundReport assemble_error_bound(const StencilProblem& problem,
                                 const BoundOptions& options) {
  return assemble_error_bound(problem, power_function(problem).p, options);
}

BoundReport assemble_error_bound(const StencilProblem& problem, double p,
                                 const BoundOptions& options) {
  problem.validate();
  const Smoothness sm = problem.kernel.smoothness();
  const int dim = problem.dimension();
  const int k = problem.op.order();

  BoundReport report;
  report.p = p;
  report.q_used =
      options.q >= 0 ? options.q : std::max(problem.s, sm.r / 2 + 1);
  report.mu_used = options.mu >= 0.0 ? options.mu : 0.5 * (sm.r + sm.gamma);
  if (report.q_used < problem.s)
    throw error("growth order override is below the kernel's order");

  const GrowthResult growth =
      growth_dual(problem.points.center, problem.points.nodes, report.q_used,
                  problem.op, report.mu_used);
  report.rho = growth.value;
  report.rho_status = growth.status;

  const double diam = problem.points.set_diameter();
  const double radius = diam > 0.0 ? diam : 1.0;
  report.c_dr = cdr_constant(dim, sm.r, sm.gamma);
  report.phi_seminorm =
      phi_holder_seminorm(problem.kernel, dim, radius, options.seminorm_mode,
                          options.seminorm_samples, options.seed);
  report.rhs = report.rho * std::sqrt(report.c_dr * report.phi_seminorm.value);
  report.certified =
      report.phi_seminorm.mode == SeminormMode::exact_closed_form &&
      growth.finite() && report.p <= report.rhs * (1.0 + 1e-8);

  if (options.direct_route) {
    const int dq =
        options.direct_q >= 0 ? options.direct_q : std::max(problem.s, k + 1);
    if (dq < std::max(problem.s, k + 1) || dq > sm.r || dq - 1 > sm.r / 2)
      throw error("direct-route order q is outside the admissible range");
    const GrowthResult direct =
        growth_dual(problem.points.center, problem.points.nodes, dq,
                    problem.op, static_cast<double>(dq));
    report.direct_q = dq;
    report.direct_seminorm = mixed_kernel_seminorm_estimate(
        problem.kernel, problem.points, dq - 1, 1.0, options.seminorm_samples,
        options.seed);
    report.direct_rhs = direct.value * std::sqrt(*report.direct_seminorm);
  }
  return report;
}

}  // namespace stencilcert
