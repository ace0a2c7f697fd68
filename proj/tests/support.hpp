#ifndef STENCILCERT_TESTS_SUPPORT_HPP
#define STENCILCERT_TESTS_SUPPORT_HPP

// Shared test helpers.  The oracles here are deliberately independent of
// the library internals: brute-force enumeration, nested finite
// differences, a tiny symbolic polynomial type, and gamma-function forms
// of the combinatorial constants.  Library results are checked against
// these, never against themselves.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stencilcert/geometry.hpp"
#include "stencilcert/kernels.hpp"
#include "stencilcert/polyspace.hpp"
#include "stencilcert/stencil.hpp"

namespace testsupport {

namespace sc = stencilcert;

// ---------------------------------------------------------------- indices

// Every exponent vector with |alpha| <= max_total, collected by plain
// recursion and sorted: total degree first, then lexicographically with
// the leading coordinate decreasing (so x^2 comes before xy before y^2).
inline void collect_indices(int dim, int axis, int left, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
  if (axis == dim) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[axis] = e;
    collect_indices(dim, axis + 1, left - e, cur, out);
  }
  cur[axis] = 0;
}

inline std::vector<std::vector<int>> brute_force_indices(int dim,
                                                         int max_total) {
  std::vector<std::vector<int>> out;
  if (max_total < 0) return out;
  std::vector<int> cur(dim, 0);
  collect_indices(dim, 0, max_total, cur, out);
  std::sort(out.begin(), out.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              int ta = 0, tb = 0;
              for (int e : a) ta += e;
              for (int e : b) tb += e;
              if (ta != tb) return ta < tb;
              return a > b;  // descending lexicographic within a degree
            });
  return out;
}

// ------------------------------------------------------ finite differences

// Nested central differences for the mixed kernel partial.  Each
// recursion level differentiates one coordinate of x or y; accuracy is
// O(h^2) per level on smooth stretches.
inline double fd_kernel_partial(const sc::KernelSpec& kernel,
                                std::vector<int> alpha, std::vector<int> beta,
                                sc::Point x, sc::Point y, double h) {
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0) {
      --alpha[i];
      sc::Point xp = x, xm = x;
      xp[static_cast<int>(i)] += h;
      xm[static_cast<int>(i)] -= h;
      return (fd_kernel_partial(kernel, alpha, beta, xp, y, h) -
              fd_kernel_partial(kernel, alpha, beta, xm, y, h)) /
             (2.0 * h);
    }
  }
  for (size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0) {
      --beta[i];
      sc::Point yp = y, ym = y;
      yp[static_cast<int>(i)] += h;
      ym[static_cast<int>(i)] -= h;
      return (fd_kernel_partial(kernel, alpha, beta, x, yp, h) -
              fd_kernel_partial(kernel, alpha, beta, x, ym, h)) /
             (2.0 * h);
    }
  }
  return sc::kernel_value(kernel, x, y);
}

// ---------------------------------------------------------- symbolic poly

// Sparse multivariate polynomial over exponent vectors.  Slow and exact
// enough for the small degrees the tests use.
struct Poly {
  int dim = 1;
  std::map<std::vector<int>, double> terms;

  static Poly zero(int dim) { return Poly{dim, {}}; }

  static Poly monomial(int dim, const std::vector<int>& alpha,
                       double coeff = 1.0) {
    Poly p{dim, {}};
    p.terms[alpha] = coeff;
    return p;
  }

  // (x - c)^alpha expanded into plain monomials
  static Poly shifted_monomial(int dim, const std::vector<int>& alpha,
                               const sc::Point& c) {
    Poly p{dim, {{std::vector<int>(dim, 0), 1.0}}};
    for (int i = 0; i < dim; ++i) {
      Poly axis = Poly::zero(dim);
      // (x_i - c_i)^{alpha_i} by the binomial theorem
      std::vector<double> binom(alpha[i] + 1, 0.0);
      binom[0] = 1.0;
      for (int n = 1; n <= alpha[i]; ++n)
        for (int k = n; k >= 1; --k) binom[k] += binom[k - 1];
      for (int k = 0; k <= alpha[i]; ++k) {
        std::vector<int> e(dim, 0);
        e[i] = k;
        axis.terms[e] += binom[k] * std::pow(-c[i], alpha[i] - k);
      }
      p = p * axis;
    }
    return p;
  }

  Poly operator*(const Poly& other) const {
    Poly out = Poly::zero(dim);
    for (const auto& [ea, ca] : terms)
      for (const auto& [eb, cb] : other.terms) {
        std::vector<int> e(dim);
        for (int i = 0; i < dim; ++i) e[i] = ea[i] + eb[i];
        out.terms[e] += ca * cb;
      }
    return out;
  }

  Poly& operator+=(const Poly& other) {
    for (const auto& [e, c] : other.terms) terms[e] += c;
    return *this;
  }

  Poly& scale(double s) {
    for (auto& [e, c] : terms) c *= s;
    return *this;
  }

  Poly partial(int axis) const {
    Poly out = Poly::zero(dim);
    for (const auto& [e, c] : terms) {
      if (e[axis] == 0) continue;
      std::vector<int> d = e;
      --d[axis];
      out.terms[d] += c * e[axis];
    }
    return out;
  }

  double eval(const sc::Point& x) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms) {
      double t = c;
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      acc += t;
    }
    return acc;
  }

  double partial_at(const std::vector<int>& alpha, const sc::Point& x) const {
    Poly p = *this;
    for (size_t i = 0; i < alpha.size(); ++i)
      for (int k = 0; k < alpha[i]; ++k) p = p.partial(static_cast<int>(i));
    return p.eval(x);
  }

  double apply(const sc::DiffOperator& op, const sc::Point& z) const {
    double acc = 0.0;
    for (const auto& [alpha, coeff] : op.terms())
      acc += coeff * partial_at(alpha.exponents(), z);
    return acc;
  }
};

// --------------------------------------------------------------- cdr form

// Same constant the bound module computes, but through log-gamma:
// prod_{i=1..m}(theta + i) = Gamma(theta+m+1) / Gamma(theta+1).
inline double cdr_gamma_form(int dim, int r, double gamma) {
  const int m = r / 2;
  const double theta = (r % 2 == 0) ? gamma / 2.0 : (1.0 + gamma) / 2.0;
  const double logprod = std::lgamma(theta + m + 1.0) - std::lgamma(theta + 1.0);
  const double num = (r % 2 == 0 ? 2.0 : 1.0) * std::pow(dim, r / 2.0);
  return num * std::exp(-2.0 * logprod);
}

// -------------------------------------------------------------- randomness

inline sc::Point random_point(int dim, std::mt19937& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  sc::Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = u(rng);
  return p;
}

// A random admissible (kernel, operator, s) combination in dimension dim.
// The derivative engine handles total order <= 4, so operator orders stay
// <= 2 and the kernel is drawn smooth enough for Q-form assembly.
inline sc::StencilProblem random_problem(std::mt19937& rng, int dim_cap = 2,
                                         int n_cap = 12) {
  std::uniform_int_distribution<int> dims(1, dim_cap);
  const int dim = dims(rng);
  std::uniform_int_distribution<int> fam(0, 2);
  std::uniform_int_distribution<int> ord(0, 2);
  const int family = fam(rng);
  int k = ord(rng);

  sc::KernelSpec kernel = sc::KernelSpec::polyharmonic(3.0);
  double spread = 1.0;
  switch (family) {
    case 0: {  // polyharmonic, nu > 2k and not even
      static const double nus[] = {1.5, 2.5, 3.0, 3.5, 4.6, 5.0};
      std::uniform_int_distribution<int> pick(0, 5);
      double nu = nus[pick(rng)];
      while (nu <= 2 * k) k--;
      kernel = sc::KernelSpec::polyharmonic(nu);
      break;
    }
    case 1: {  // thin plate; n >= k+1 keeps 2k below the profile smoothness
      k = std::min(k, 1);
      std::uniform_int_distribution<int> pick(k + 1, 2);
      kernel = sc::KernelSpec::thin_plate(pick(rng));
      break;
    }
    default: {  // wendland, n >= k, dimension <= 3 holds here
      k = std::min(k, 2);
      std::uniform_int_distribution<int> pick(std::max(k, 0), 2);
      int n = pick(rng);
      std::uniform_int_distribution<int> sdraw(0, 1);
      kernel = sc::KernelSpec::wendland(dim, n, sdraw(rng));
      spread = 0.35;  // keep interactions inside the unit support
      break;
    }
  }

  // operator: a random combination of total order exactly k
  std::vector<sc::DiffOperator::Term> terms;
  auto idx = brute_force_indices(dim, k);
  std::uniform_real_distribution<double> cdraw(-2.0, 2.0);
  for (const auto& e : idx) {
    int t = 0;
    for (int v : e) t += v;
    if (t == k) terms.emplace_back(sc::MultiIndex(e), cdraw(rng));
  }
  if (terms.size() > 1) {
    std::shuffle(terms.begin(), terms.end(), rng);
    terms.resize(1 + rng() % terms.size());
  }
  // guard against an all-but-zero draw
  bool live = false;
  for (auto& [a, c] : terms) live = live || std::abs(c) > 1e-3;
  if (!live) terms[0].second = 1.0;
  sc::DiffOperator op(dim, terms);

  int s = kernel.cpd_order();
  if (s < 3 && rng() % 3 == 0) ++s;
  if (s > 0) kernel = [&] {
    switch (kernel.family()) {
      case sc::KernelFamily::polyharmonic:
        return sc::KernelSpec::polyharmonic(kernel.nu(), s);
      case sc::KernelFamily::thin_plate:
        return sc::KernelSpec::thin_plate(kernel.tps_order(), s);
      default:
        return sc::KernelSpec::wendland(kernel.wendland_dim(),
                                        kernel.wendland_order(), s);
    }
  }();

  const int m = sc::poly_dim(dim, s);
  std::uniform_int_distribution<int> ndraw(std::max({m, k + 1, 2}), n_cap);
  const int n = ndraw(rng);

  sc::PointSet pts;
  pts.center = random_point(dim, rng, 0.3 * spread);
  for (int i = 0; i < n; ++i)
    pts.nodes.push_back(random_point(dim, rng, spread));

  sc::StencilProblem problem{kernel, op, pts, s};
  problem.validate();
  return problem;
}

// Basis of the nullspace of V' (columns), possibly empty.
inline sc::Matrix moment_nullspace(const sc::Matrix& v) {
  Eigen::FullPivLU<sc::Matrix> lu(v.transpose());
  return lu.kernel();
}

// w* plus a random polynomially-neutral perturbation: still exact on the
// polynomial block, never optimal unless the perturbation vanishes.
inline sc::Vector random_exact_weights(const sc::StencilProblem& problem,
                                       const sc::Vector& wstar,
                                       std::mt19937& rng, double size = 1.0) {
  sc::SaddleSystem sys = sc::assemble_saddle(problem);
  sc::Matrix z = moment_nullspace(sys.V);
  if (z.cols() == 0) return wstar;
  std::normal_distribution<double> g(0.0, size);
  sc::Vector t(z.cols());
  for (int i = 0; i < t.size(); ++i) t[i] = g(rng);
  return wstar + z * t;
}

// ------------------------------------------------------------ subprocess

struct RunOutput {
  int code = -1;
  std::string text;  // stdout and stderr interleaved
};

inline RunOutput run_command(const std::string& cmd) {
  RunOutput out;
  std::string full = cmd + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.text.append(buf, got);
  int status = pclose(pipe);
  if (status >= 0 && WIFEXITED(status)) out.code = WEXITSTATUS(status);
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  FILE* f = fopen(path.c_str(), "w");
  if (f) {
    fwrite(content.data(), 1, content.size(), f);
    fclose(f);
  }
}

inline std::string read_file(const std::string& path) {
  std::string text;
  FILE* f = fopen(path.c_str(), "r");
  if (!f) return text;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  fclose(f);
  return text;
}

}  // namespace testsupport

#endif
