#include "ota/rotation.hpp"

#include <cmath>
#include <stdexcept>

#include "ota/numeric.hpp"

namespace ota {

void fwht_normalized(std::vector<double>& v) {
  const std::size_t n = v.size();
  if (!is_pow2(n)) throw std::invalid_argument("fwht_normalized: size must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& x : v) x *= scale;
}

RotationOperator::RotationOperator(std::size_t dim, Rng& shared)
    : dim_(dim), padded_(next_pow2(dim)), signs_(padded_) {
  if (dim == 0) throw std::invalid_argument("RotationOperator: dim must be positive");
  for (double& s : signs_) s = shared.sign();
}

RotationOperator::RotationOperator(std::size_t dim, std::vector<double> signs)
    : dim_(dim), padded_(next_pow2(dim)), signs_(std::move(signs)) {
  if (dim == 0) throw std::invalid_argument("RotationOperator: dim must be positive");
  if (signs_.size() != padded_) throw std::invalid_argument("RotationOperator: signs size mismatch");
  for (double s : signs_) {
    if (s != 1.0 && s != -1.0) throw std::invalid_argument("RotationOperator: signs must be +-1");
  }
}

std::vector<double> RotationOperator::rotate(const std::vector<double>& x) const {
  if (x.size() != dim_ && x.size() != padded_)
    throw std::invalid_argument("RotationOperator::rotate: bad input size");
  std::vector<double> v(padded_, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = signs_[i] * x[i];
  fwht_normalized(v);
  return v;
}

std::vector<double> RotationOperator::inverse_rotate(const std::vector<double>& y) const {
  if (y.size() != padded_)
    throw std::invalid_argument("RotationOperator::inverse_rotate: bad input size");
  std::vector<double> v = y;
  fwht_normalized(v);
  for (std::size_t i = 0; i < padded_; ++i) v[i] *= signs_[i];
  return v;
}

}  // namespace ota
