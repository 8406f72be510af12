#include "ota/analog_codes.hpp"

#include <cmath>
#include <stdexcept>

#include "ota/numeric.hpp"
#include "ota/rng.hpp"

namespace ota {

ScaledAnalogCode::ScaledAnalogCode(std::size_t dim, double bound, double power)
    : dim_(dim), bound_(bound), power_(power) {
  if (dim == 0) throw std::invalid_argument("ScaledAnalogCode: dim must be positive");
  if (bound <= 0.0) throw std::invalid_argument("ScaledAnalogCode: bound must be positive");
  if (power <= 0.0) throw std::invalid_argument("ScaledAnalogCode: power must be positive");
  scale_ = std::sqrt(power_ * static_cast<double>(dim_)) / bound_;
}

double ScaledAnalogCode::declared_alpha(double snr) const {
  if (snr <= 0.0) throw std::invalid_argument("declared_alpha: snr must be positive");
  return bound_ * std::sqrt(1.0 + 1.0 / snr);
}

std::vector<double> ScaledAnalogCode::encode(const std::vector<double>& grad, std::uint64_t) {
  if (grad.size() != dim_) throw std::invalid_argument("encode: gradient has wrong dimension");
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = scale_ * grad[i];
  return out;
}

std::vector<double> ScaledAnalogCode::decode(const std::vector<double>& received, std::uint64_t) {
  if (received.size() != dim_) throw std::invalid_argument("decode: block has wrong length");
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = received[i] / scale_;
  return out;
}

SampledAnalogCode::SampledAnalogCode(std::size_t dim, std::size_t uses, double bound, double power,
                                     std::uint64_t shared_seed)
    : dim_(dim),
      padded_(next_pow2(dim)),
      uses_(uses),
      bound_(bound),
      power_(power),
      shared_seed_(shared_seed) {
  if (dim == 0) throw std::invalid_argument("SampledAnalogCode: dim must be positive");
  if (uses == 0 || uses > padded_)
    throw std::invalid_argument("SampledAnalogCode: uses must be in [1, padded dim]");
  if (bound <= 0.0) throw std::invalid_argument("SampledAnalogCode: bound must be positive");
  if (power <= 0.0) throw std::invalid_argument("SampledAnalogCode: power must be positive");
}

double SampledAnalogCode::declared_alpha(double snr) const {
  if (snr <= 0.0) throw std::invalid_argument("declared_alpha: snr must be positive");
  double ratio = static_cast<double>(padded_) / static_cast<double>(uses_);
  return bound_ * std::sqrt(ratio * (1.0 + 1.0 / snr));
}

SampledAnalogCode::IterationDraw SampledAnalogCode::draw_for(std::uint64_t iteration) const {
  Rng shared(derive_seed(shared_seed_, iteration));
  IterationDraw draw;
  draw.signs.resize(padded_);
  for (std::size_t i = 0; i < padded_; ++i) draw.signs[i] = shared.sign();
  // Fisher-Yates prefix: the first `uses_` entries are a uniform sample of
  // distinct indices.
  std::vector<std::size_t> perm(padded_);
  for (std::size_t i = 0; i < padded_; ++i) perm[i] = i;
  for (std::size_t i = 0; i < uses_; ++i) {
    std::size_t j = i + static_cast<std::size_t>(shared.below(static_cast<std::uint64_t>(padded_ - i)));
    std::swap(perm[i], perm[j]);
  }
  draw.sample.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(uses_));
  return draw;
}

std::vector<double> SampledAnalogCode::encode(const std::vector<double>& grad,
                                              std::uint64_t iteration) {
  if (grad.size() != dim_) throw std::invalid_argument("encode: gradient has wrong dimension");
  IterationDraw draw = draw_for(iteration);
  RotationOperator rot(dim_, draw.signs);
  std::vector<double> rotated = rot.rotate(grad);
  double scale = std::sqrt(power_ * static_cast<double>(padded_)) / bound_;
  std::vector<double> out(uses_);
  for (std::size_t i = 0; i < uses_; ++i) out[i] = scale * rotated[draw.sample[i]];
  return out;
}

std::vector<double> SampledAnalogCode::decode(const std::vector<double>& received,
                                              std::uint64_t iteration) {
  if (received.size() != uses_) throw std::invalid_argument("decode: block has wrong length");
  IterationDraw draw = draw_for(iteration);
  RotationOperator rot(dim_, draw.signs);
  double unscale = bound_ / std::sqrt(power_ * static_cast<double>(padded_));
  double upweight = static_cast<double>(padded_) / static_cast<double>(uses_);
  std::vector<double> embedded(padded_, 0.0);
  for (std::size_t i = 0; i < uses_; ++i)
    embedded[draw.sample[i]] = upweight * unscale * received[i];
  std::vector<double> restored = rot.inverse_rotate(embedded);
  restored.resize(dim_);
  return restored;
}

}  // namespace ota
