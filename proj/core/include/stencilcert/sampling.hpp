#ifndef STENCILCERT_SAMPLING_HPP
#define STENCILCERT_SAMPLING_HPP

#include <cstdint>

#include "stencilcert/geometry.hpp"

namespace stencilcert {

/** Default seed for all deterministic sampling in this library. */
inline constexpr std::uint64_t kDefaultSeed = 9001;

/**
 * Halton low-discrepancy sequence in [0,1)^dim.  The seed offsets the
 * start index, so a fixed seed gives a reproducible stream and the first
 * n draws are a prefix of the first 2n draws.
 */
class HaltonSequence {
 public:
  explicit HaltonSequence(int dim, std::uint64_t seed = kDefaultSeed);

  Vector next();

 private:
  int dim_;
  std::uint64_t index_;
};

/** Radical-inverse value of index in the given base. */
double radical_inverse(std::uint64_t index, int base);

}  // namespace stencilcert

#endif
