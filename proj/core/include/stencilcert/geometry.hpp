#ifndef STENCILCERT_GEOMETRY_HPP
#define STENCILCERT_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace stencilcert {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/** Exponent vector of a d-variate monomial x^alpha. */
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  /** Convenience constructors for low dimensions. */
  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int axis);

  int dim() const { return static_cast<int>(e_.size()); }
  int order() const;                 // |alpha| = sum of exponents
  double factorial() const;          // alpha! as a double (exact for small orders)
  const std::vector<int>& exponents() const { return e_; }
  int operator[](int i) const { return e_[i]; }

  /** Componentwise sum, used for products of derivatives. */
  MultiIndex operator+(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const { return e_ == other.e_; }
  bool operator<(const MultiIndex& other) const { return e_ < other.e_; }

  /** Evaluate the monomial u^alpha. */
  double monomial(const Eigen::Ref<const Vector>& u) const;

  std::string to_string() const;  // e.g. "(2,0,1)"

 private:
  std::vector<int> e_;
};

/**
 * All multi-indices with |alpha| <= max_total_degree in graded
 * lexicographic order: by total degree, then lexicographically with the
 * leading coordinate decreasing.  For d=2, degree 2 this yields
 * 1, x, y, x^2, xy, y^2.  Every polynomial basis and every moment vector
 * in this library uses this ordering.
 */
std::vector<MultiIndex> enumerate_multi_indices(int dim, int max_total_degree);

/** A differentiation stencil geometry: the evaluation center z and nodes X. */
struct PointSet {
  Point center;
  std::vector<Point> nodes;

  int dimension() const { return static_cast<int>(center.size()); }
  int size() const { return static_cast<int>(nodes.size()); }

  /** Stencil radius h = max_j ||x_j - z||. */
  double stencil_radius() const;

  /**
   * Diameter of the union of segments [z, x_j].  The maximum is attained
   * at segment endpoints, so only pairwise endpoint distances are checked.
   * Used as the radius of the ball on which kernel smoothness is measured.
   */
  double set_diameter() const;

  /** Dilation about the center: nodes map to z + h (x_j - z). */
  PointSet scaled(double h) const;

  /** True if two nodes coincide exactly.  Flagged, not an error, here. */
  bool has_duplicate_nodes() const;

  void validate() const;  // throws on dimension mismatches / empty set
};

/**
 * Read points from CSV, one node per row, coordinates comma separated.
 * Throws stencilcert::error on malformed or ragged input.
 */
std::vector<Point> read_points_csv(const std::string& path);

/** Write one value per row at full double precision. */
void write_values_csv(const std::string& path, const Vector& values);

}  // namespace stencilcert

#endif
