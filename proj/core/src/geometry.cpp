#include "stencilcert/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stencilcert/errors.hpp"

namespace stencilcert {

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
  for (int v : e_) {
    if (v < 0) throw error("multi-index exponents must be nonnegative");
  }
}

MultiIndex MultiIndex::zero(int dim) {
  return MultiIndex(std::vector<int>(dim, 0));
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  std::vector<int> e(dim, 0);
  e.at(axis) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::order() const {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : e_)
    for (int i = 2; i <= v; ++i) f *= i;
  return f;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw error("multi-index dimension mismatch");
  std::vector<int> e(e_);
  for (size_t i = 0; i < e.size(); ++i) e[i] += other.e_[i];
  return MultiIndex(std::move(e));
}

double MultiIndex::monomial(const Eigen::Ref<const Vector>& u) const {
  if (u.size() != dim()) throw error("monomial evaluated in wrong dimension");
  double p = 1.0;
  for (int i = 0; i < dim(); ++i)
    for (int k = 0; k < e_[i]; ++k) p *= u[i];
  return p;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(e_[i]);
  }
  return s + ")";
}

namespace {

void enumerate_degree(int dim, int degree, std::vector<int>& partial,
                      std::vector<MultiIndex>& out) {
  if (static_cast<int>(partial.size()) == dim - 1) {
    partial.push_back(degree);
    out.push_back(MultiIndex(partial));
    partial.pop_back();
    return;
  }
  // Leading coordinate descending gives 1, x, y, x^2, xy, y^2, ...
  for (int k = degree; k >= 0; --k) {
    partial.push_back(k);
    enumerate_degree(dim, degree - k, partial, out);
    partial.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int dim, int max_total_degree) {
  if (dim < 1) throw error("dimension must be positive");
  std::vector<MultiIndex> out;
  for (int t = 0; t <= max_total_degree; ++t) {
    std::vector<int> partial;
    enumerate_degree(dim, t, partial, out);
  }
  return out;
}

double PointSet::stencil_radius() const {
  double r = 0.0;
  for (const Point& x : nodes) r = std::max(r, (x - center).norm());
  return r;
}

double PointSet::set_diameter() const {
  double d = stencil_radius();
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      d = std::max(d, (nodes[i] - nodes[j]).norm());
  return d;
}

PointSet PointSet::scaled(double h) const {
  PointSet out;
  out.center = center;
  out.nodes.reserve(nodes.size());
  for (const Point& x : nodes) out.nodes.push_back(center + h * (x - center));
  return out;
}

bool PointSet::has_duplicate_nodes() const {
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) return true;
  return false;
}

void PointSet::validate() const {
  if (center.size() == 0) throw error("point set has no center");
  if (nodes.empty()) throw error("point set has no nodes");
  for (const Point& x : nodes)
    if (x.size() != center.size())
      throw error("node dimension does not match center dimension");
}

std::vector<Point> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open points file: " + path);
  std::vector<Point> pts;
  std::string line;
  int dim = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Trim trailing CR and skip blank lines.
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    std::vector<double> coords;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(field, &used);
        while (used < field.size() && std::isspace(field[used])) ++used;
        if (used != field.size()) throw std::invalid_argument(field);
        coords.push_back(v);
      } catch (const std::exception&) {
        throw error("malformed number in " + path + " line " +
                    std::to_string(lineno) + ": '" + field + "'");
      }
    }
    if (coords.empty())
      throw error("empty row in " + path + " line " + std::to_string(lineno));
    if (dim < 0) dim = static_cast<int>(coords.size());
    if (static_cast<int>(coords.size()) != dim)
      throw error("ragged row in " + path + " line " + std::to_string(lineno));
    pts.push_back(Eigen::Map<Vector>(coords.data(), coords.size()));
  }
  if (pts.empty()) throw error("no points in " + path);
  return pts;
}

void write_values_csv(const std::string& path, const Vector& values) {
  std::ofstream out(path);
  if (!out) throw error("cannot write file: " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out << buf << '\n';
  }
}

}  // namespace stencilcert
