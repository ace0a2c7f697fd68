#include "stencilcert/polyspace.hpp"

#include "stencilcert/errors.hpp"

namespace stencilcert {

int poly_dim(int dim, int q) {
  if (dim < 1) throw error("dimension must be positive");
  if (q <= 0) return 0;
  // binomial(dim + q - 1, dim) evaluated without overflow for sane sizes
  long long num = 1, den = 1;
  for (int i = 1; i <= dim; ++i) {
    num *= q - 1 + i;
    den *= i;
  }
  return static_cast<int>(num / den);
}

PolyBasis::PolyBasis(int dim_, int q_, Point center_)
    : dim(dim_), q(q_), center(std::move(center_)) {
  if (dim < 1) throw error("dimension must be positive");
  if (center.size() != dim) throw error("basis center dimension mismatch");
  if (q > 0) members = enumerate_multi_indices(dim, q - 1);
}

double PolyBasis::evaluate(int i, const Point& x) const {
  return members.at(i).monomial(x - center);
}

Matrix vandermonde(const PolyBasis& basis, const std::vector<Point>& nodes) {
  Matrix V(nodes.size(), basis.size());
  for (size_t j = 0; j < nodes.size(); ++j) {
    if (nodes[j].size() != basis.dim)
      throw error("node dimension does not match basis dimension");
    Vector u = nodes[j] - basis.center;
    for (int i = 0; i < basis.size(); ++i)
      V(static_cast<Eigen::Index>(j), i) = basis.members[i].monomial(u);
  }
  return V;
}

Vector operator_moments(const PolyBasis& basis, const DiffOperator& op) {
  if (op.dim() != basis.dim)
    throw error("operator dimension does not match basis dimension");
  Vector m = Vector::Zero(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const MultiIndex& alpha = basis.members[i];
    for (const auto& [beta, coeff] : op.terms()) {
      if (beta == alpha) m[i] += coeff * alpha.factorial();
    }
  }
  return m;
}

}  // namespace stencilcert
