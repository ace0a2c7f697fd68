#include "stencilcert/sampling.hpp"

#include "stencilcert/errors.hpp"

namespace stencilcert {

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                           23, 29, 31, 37, 41, 43, 47, 53};
}

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double v = 0.0;
  while (index > 0) {
    v += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return v;
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed)
    : dim_(dim), index_(1 + (seed % 4096) * 64) {
  if (dim < 1 || dim > 16) throw error("halton dimension out of range");
}

Vector HaltonSequence::next() {
  Vector v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = radical_inverse(index_, kPrimes[i]);
  ++index_;
  return v;
}

}  // namespace stencilcert
