#ifndef STENCILCERT_BOUNDS_HPP
#define STENCILCERT_BOUNDS_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "stencilcert/growth.hpp"
#include "stencilcert/sampling.hpp"
#include "stencilcert/stencil.hpp"

namespace stencilcert {

/**
 * Combinatorial constant tying the mixed kernel seminorm to the Hölder
 * seminorm of the profile:
 *
 *   even r:  2 d^{r/2} / prod_{i=1..r/2} (gamma/2 + i)^2
 *   odd  r:    d^{r/2} / prod_{i=1..floor(r/2)} ((1+gamma)/2 + i)^2
 *
 * gamma is the Hölder exponent of the r-th derivatives, in (0,1].
 */
double cdr_constant(int dim, int r, double gamma);

enum class SeminormMode {
  automatic,               // exact when a closed form exists, else sampled
  exact_closed_form,       // demand the closed form; error when unavailable
  sampled_lower_estimate,  // force sampling
};

/**
 * Hölder seminorm |Phi|_{C^{r,gamma}(B)} of a kernel profile over the
 * centered ball of the given radius.  Sampled values are lower
 * estimates: suprema over finitely many quasi-random pairs.  Only exact
 * values may certify an error bound.
 */
struct HolderEstimate {
  double value = 0.0;
  SeminormMode mode = SeminormMode::sampled_lower_estimate;
  int r = 0;
  double gamma = 1.0;
  double radius = 0.0;
  int samples = 0;         // 0 in exact mode
  std::uint64_t seed = 0;  // meaningful in sampled mode only
};

/**
 * Closed forms implemented: polyharmonic in dimension 1; Wendland with
 * n = 0 in any supported dimension, and any Wendland in dimension 1
 * (piecewise-polynomial derivative bounds on [0, min(radius, 1)]).
 * Everything else falls back to sampling.
 */
HolderEstimate phi_holder_seminorm(const KernelSpec& kernel, int dim,
                                   double radius,
                                   SeminormMode mode = SeminormMode::automatic,
                                   int samples = 4096,
                                   std::uint64_t seed = kDefaultSeed);

/** alpha, x -> d^alpha f(x). */
using PartialEvaluator =
    std::function<double(const MultiIndex&, const Point&)>;

/**
 * Sampled lower estimate of max_{|alpha|=r} sup |d^a f(x) - d^a f(y)| /
 * ||x-y||^gamma over pairs in the centered ball.  Deterministic for a
 * fixed seed; the first n draws are a prefix of the first 2n, so
 * increasing the sample count never decreases the value.
 */
double holder_sampled_lower_estimate(const PartialEvaluator& f, int dim,
                                     int r, double gamma, double radius,
                                     int samples, std::uint64_t seed);

/** alpha, beta, x, y -> d^{alpha,beta} U(x, y). */
using MixedPartialEvaluator = std::function<double(
    const MultiIndex&, const MultiIndex&, const Point&, const Point&)>;

/**
 * Sampled lower estimate of the mixed seminorm |K|_{z,X,m+gamma} over
 * the union of segments [z, x_i]:
 *
 *   (1/prod_{i=1..m}(gamma+i)^2) sqrt( sum_{|a|=|b|=m} (m!/a!)(m!/b!)
 *       sup |U(x,y)-U(x,z)-U(z,y)+U(z,z)|^2
 *           / (||x-z||^gamma ||y-z||^gamma)^2 )
 *
 * with U = d^{a,b}K.  m = 0 reduces to the plain second-difference
 * seminorm of K itself.
 */
double mixed_kernel_seminorm_estimate(const KernelSpec& kernel,
                                      const PointSet& points, int m,
                                      double gamma, int samples = 4096,
                                      std::uint64_t seed = kDefaultSeed);

double mixed_seminorm_sampled(const MixedPartialEvaluator& u,
                              const PointSet& points, int m, double gamma,
                              int samples, std::uint64_t seed);

struct BoundOptions {
  int q = -1;        // growth order override; default max(s, floor(r/2)+1)
  double mu = -1.0;  // growth exponent override; default (r+gamma)/2
  SeminormMode seminorm_mode = SeminormMode::automatic;
  int seminorm_samples = 4096;
  std::uint64_t seed = kDefaultSeed;
  /**
   * Also evaluate the bound that skips the profile seminorm and uses a
   * sampled mixed kernel seminorm at integer exponent q directly:
   * rho_{q}(z,X,q) sqrt(|K|_{z,X,q}).  A study aid, never certified,
   * since the sampled factor is a lower estimate.
   */
  bool direct_route = false;
  int direct_q = -1;  // default max(s, k+1)
};

struct BoundReport {
  double p = 0.0;    // power function value being certified against
  double rho = 0.0;  // growth function value (may be +infinity)
  GrowthStatus rho_status = GrowthStatus::finite;
  double c_dr = 0.0;
  HolderEstimate phi_seminorm;
  double rhs = 0.0;  // rho * sqrt(c_dr * phi_seminorm.value)
  int q_used = 0;
  double mu_used = 0.0;
  /** Exact seminorm, finite rho, and p <= rhs (1 + 1e-8). */
  bool certified = false;

  std::optional<int> direct_q;
  std::optional<double> direct_seminorm;
  std::optional<double> direct_rhs;
};

/**
 * The improved error bound P <= rho_{q,D}(z,X,(r+gamma)/2) sqrt(C |Phi|)
 * for translation-invariant kernels.  The first overload computes the
 * power function itself; the second takes a precomputed value.
 */
BoundReport assemble_error_bound(const StencilProblem& problem,
                                 const BoundOptions& options = {});
BoundReport assemble_error_bound(const StencilProblem& problem, double p,
                                 const BoundOptions& options = {});

}  // namespace stencilcert

#endif
