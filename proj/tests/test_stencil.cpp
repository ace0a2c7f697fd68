#include "doctest.h"

#include <cmath>
#include <random>

#include "stencilcert/errors.hpp"
#include "stencilcert/stencil.hpp"
#include "support.hpp"

namespace sc = stencilcert;
namespace ts = testsupport;

namespace {

sc::Point pt1(double x) {
  sc::Point p(1);
  p << x;
  return p;
}

sc::Point pt2(double x, double y) {
  sc::Point p(2);
  p << x, y;
  return p;
}

sc::StencilProblem midpoint_problem() {
  sc::PointSet pts;
  pts.center = pt1(0.5);
  pts.nodes = {pt1(0.0), pt1(1.0)};
  return sc::StencilProblem{sc::KernelSpec::polyharmonic(3.0),
                            sc::DiffOperator::identity(1), pts, 2};
}

sc::StencilProblem collinear_problem(int axis) {
  sc::PointSet pts;
  pts.center = pt2(1.0, 0.0);
  pts.nodes = {pt2(0.0, 0.0), pt2(2.0, 0.0)};
  return sc::StencilProblem{sc::KernelSpec::polyharmonic(3.0),
                            sc::DiffOperator::partial(2, axis), pts, 2};
}

}  // namespace

TEST_CASE("consistency on full and deficient geometries") {
  auto along = sc::check_consistency(collinear_problem(0));
  CHECK(along.consistent);
  CHECK(along.rank_v == 2);
  CHECK(along.residual <= 1e-12);

  auto across = sc::check_consistency(collinear_problem(1));
  CHECK(!across.consistent);
  CHECK(across.rank_v == 2);
  CHECK(across.residual == doctest::Approx(1.0));
  CHECK(across.worst_moment_name == "(0,1)");

  std::mt19937 rng(101);
  auto generic = sc::check_consistency(ts::random_problem(rng));
  CHECK(generic.consistent);
}

TEST_CASE("midpoint interpolation weights and multipliers") {
  auto problem = midpoint_problem();
  auto result = sc::compute_weights(problem);
  REQUIRE(result.weights.size() == 2);
  CHECK(result.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(result.aux.size() == 2);
  CHECK(result.aux[0] == doctest::Approx(-0.375).epsilon(1e-12));
  CHECK(result.aux[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(result.diagnostics.vandermonde_rank == 2);
  CHECK(!result.diagnostics.duplicate_nodes);
  CHECK(result.diagnostics.condition_estimate > 0.0);
}

TEST_CASE("evaluation at a node reproduces that node") {
  sc::PointSet pts;
  pts.center = pt1(0.5);
  pts.nodes = {pt1(0.0), pt1(0.5), pt1(1.0)};
  sc::StencilProblem problem{sc::KernelSpec::polyharmonic(3.0),
                             sc::DiffOperator::identity(1), pts, 2};
  auto result = sc::compute_weights(problem);
  CHECK(std::abs(result.weights[0]) <= 1e-8);
  CHECK(result.weights[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(result.weights[2]) <= 1e-8);
}

TEST_CASE("central difference weights") {
  for (double h : {0.5, 0.0625}) {
    sc::PointSet pts;
    pts.center = pt1(0.0);
    pts.nodes = {pt1(-h), pt1(h)};
    sc::StencilProblem problem{sc::KernelSpec::polyharmonic(3.0),
                               sc::DiffOperator::partial(1, 0), pts, 2};
    auto result = sc::compute_weights(problem);
    CHECK(result.weights[0] == doctest::Approx(-0.5 / h).epsilon(1e-12));
    CHECK(result.weights[1] == doctest::Approx(0.5 / h).epsilon(1e-12));
  }
}

TEST_CASE("deficient but consistent: in-line derivative on a segment") {
  auto problem = collinear_problem(0);
  auto result = sc::compute_weights(problem);
  REQUIRE(result.weights.size() == 2);
  CHECK(result.weights[0] == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(result.weights[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("deficient and inconsistent: transverse derivative throws") {
  auto problem = collinear_problem(1);
  CHECK_THROWS_AS(sc::compute_weights(problem),
                  sc::inconsistent_moment_system);
  try {
    sc::compute_weights(problem);
  } catch (const sc::inconsistent_moment_system& e) {
    CHECK(e.residual() == doctest::Approx(1.0));
    CHECK(e.worst_moment() == 2);  // the y moment in 1, x, y order
  }
}

TEST_CASE("duplicate nodes are a singular system") {
  sc::PointSet pts;
  pts.center = pt1(0.5);
  pts.nodes = {pt1(0.0), pt1(0.0), pt1(1.0)};
  sc::StencilProblem problem{sc::KernelSpec::polyharmonic(3.0),
                             sc::DiffOperator::identity(1), pts, 2};
  CHECK_THROWS_AS(sc::compute_weights(problem), sc::singular_saddle_system);
}

TEST_CASE("apply stencil") {
  sc::Vector w(3), f(3);
  w << 0.25, 0.5, 0.25;
  f << 1.0, 2.0, 3.0;
  CHECK(sc::apply_stencil(w, f) == doctest::Approx(2.0));
  sc::Vector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(sc::apply_stencil(w, bad), sc::error);
}

TEST_CASE("weights are exact on the polynomial block") {
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    sc::StencilProblem problem = ts::random_problem(rng);
    sc::StencilResult result;
    try {
      result = sc::compute_weights(problem);
    } catch (const sc::singular_saddle_system&) {
      continue;  // extremely unlucky geometry; nothing to assert
    }

    const int dim = problem.dimension();
    ts::Poly p = ts::Poly::zero(dim);
    for (const auto& e : ts::brute_force_indices(dim, problem.s - 1))
      p += ts::Poly::monomial(dim, e, coeff(rng));
    if (p.terms.empty()) continue;

    double want = p.apply(problem.op, problem.points.center);
    double got = 0.0;
    double scale = 1.0 + std::abs(want);
    for (int j = 0; j < problem.points.size(); ++j) {
      got += result.weights[j] * p.eval(problem.points.nodes[j]);
      scale += std::abs(result.weights[j] * p.eval(problem.points.nodes[j]));
    }
    CHECK(std::abs(got - want) <= 1e-10 * scale);
  }
}

TEST_CASE("weights reproduce kernel translates exactly") {
  // f = sum_i a_i K(., x_i) + poly with coefficients annihilating the
  // polynomial block: the stencil is exact on such functions at its own
  // nodes.
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    sc::StencilProblem problem = ts::random_problem(rng);
    sc::StencilResult result;
    try {
      result = sc::compute_weights(problem);
    } catch (const sc::singular_saddle_system&) {
      continue;
    }
    sc::SaddleSystem sys = sc::assemble_saddle(problem);
    sc::Matrix z = ts::moment_nullspace(sys.V);
    if (z.cols() == 0) continue;
    sc::Vector t(z.cols());
    for (int i = 0; i < t.size(); ++i) t[i] = coeff(rng);
    sc::Vector a = z * t;

    // D f(z) = sum_i a_i D'K(z, x_i); f(x_j) = (K a)_j
    double target = a.dot(sys.rhs_k);
    sc::Vector values = sys.K * a;
    double got = sc::apply_stencil(result.weights, values);
    double scale = 1.0 + std::abs(target) + values.cwiseAbs().sum();
    CHECK(std::abs(got - target) <= 1e-9 * scale);
  }
}

TEST_CASE("weights are independent of the multiplier solution") {
  // On a deficient geometry the multiplier block is non-unique, but the
  // weights are.  Re-solve through an independent reduced system and
  // compare.
  std::vector<sc::Point> line = {pt2(0.0, 0.0), pt2(0.5, 0.0), pt2(2.0, 0.0),
                                 pt2(3.0, 0.0)};
  sc::PointSet pts;
  pts.center = pt2(1.0, 0.0);
  pts.nodes = line;
  sc::StencilProblem problem{sc::KernelSpec::polyharmonic(3.0),
                             sc::DiffOperator::partial(2, 0), pts, 2};
  auto result = sc::compute_weights(problem);

  sc::SaddleSystem sys = sc::assemble_saddle(problem);
  // particular solution + kernel basis of the moment equations
  Eigen::CompleteOrthogonalDecomposition<sc::Matrix> cod(sys.V.transpose());
  sc::Vector w0 = cod.solve(sys.rhs_p);
  sc::Matrix z = ts::moment_nullspace(sys.V);
  REQUIRE(z.cols() > 0);
  // minimize the quadratic form over w0 + span(z)
  sc::Matrix h = z.transpose() * sys.K * z;
  sc::Vector rhs = z.transpose() * (sys.rhs_k - sys.K * w0);
  sc::Vector tt = h.ldlt().solve(rhs);
  sc::Vector w_direct = w0 + z * tt;

  CHECK((result.weights - w_direct).norm() <=
        1e-10 * (1.0 + w_direct.norm()));
}

TEST_CASE("weights do not depend on the polynomial basis representation") {
  std::mt19937 rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    sc::StencilProblem problem = ts::random_problem(rng);
    sc::SaddleSystem sys = sc::assemble_saddle(problem);

    // rebuild the polynomial block over plain uncentered monomials
    const int dim = problem.dimension();
    auto members = ts::brute_force_indices(dim, problem.s - 1);
    sc::SaddleSystem alt = sys;
    alt.V.resize(problem.points.size(), static_cast<int>(members.size()));
    alt.rhs_p.resize(static_cast<int>(members.size()));
    for (size_t i = 0; i < members.size(); ++i) {
      ts::Poly mono = ts::Poly::monomial(dim, members[i]);
      for (int j = 0; j < problem.points.size(); ++j)
        alt.V(j, static_cast<int>(i)) = mono.eval(problem.points.nodes[j]);
      alt.rhs_p[static_cast<int>(i)] =
          mono.apply(problem.op, problem.points.center);
    }

    sc::StencilResult a, b;
    try {
      a = sc::solve_saddle(sys);
      b = sc::solve_saddle(alt);
    } catch (const sc::singular_saddle_system&) {
      continue;
    }
    CHECK((a.weights - b.weights).norm() <= 1e-10 * (1.0 + a.weights.norm()));
  }
}

TEST_CASE("problem validation") {
  auto problem = midpoint_problem();
  problem.s = 1;  // below the kernel's minimal order
  CHECK_THROWS_AS(problem.validate(), sc::error);

  auto mismatch = midpoint_problem();
  mismatch.op = sc::DiffOperator::identity(2);
  CHECK_THROWS_AS(mismatch.validate(), sc::error);
}
