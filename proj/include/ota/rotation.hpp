#pragma once

#include <cstddef>
#include <vector>

#include "ota/rng.hpp"

namespace ota {

// In-place normalized Walsh-Hadamard transform: v <- (1/sqrt(n)) * H_n * v.
// n must be a power of two. Involution up to the normalization (applying the
// unnormalized butterfly twice multiplies by n).
void fwht_normalized(std::vector<double>& v);

// Randomized orthonormal rotation R = (1/sqrt(d')) * H * diag(s) with random
// signs s, acting on inputs zero-padded from dim to d' = next power of two.
// R^T R = I, so inverse_rotate is the transpose: diag(s) * (1/sqrt(d')) * H.
class RotationOperator {
 public:
  RotationOperator(std::size_t dim, Rng& shared);
  RotationOperator(std::size_t dim, std::vector<double> signs);  // injected signs (tests)

  std::size_t dim() const { return dim_; }
  std::size_t padded_dim() const { return padded_; }
  const std::vector<double>& signs() const { return signs_; }

  // Accepts length dim or padded_dim; returns length padded_dim.
  std::vector<double> rotate(const std::vector<double>& x) const;
  // Accepts length padded_dim; returns length padded_dim. Callers drop the
  // padding tail to get back to the original dimension.
  std::vector<double> inverse_rotate(const std::vector<double>& y) const;

 private:
  std::size_t dim_;
  std::size_t padded_;
  std::vector<double> signs_;
};

}  // namespace ota
