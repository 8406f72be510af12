#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace ota {

// Channel code for gradient vectors: maps a stochastic gradient to a block of
// channel inputs and a noisy block back to a gradient estimate. Instances are
// immutable configuration plus per-run randomness cursors; encode/decode for
// the same iteration index derive identical shared randomness, which is how
// encoder and decoder stay synchronized.
class GradientCode {
 public:
  virtual ~GradientCode() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t channel_uses() const = 0;

  // Declared second-moment factor: E||decode||^2 <= alpha^2 whenever the
  // oracle satisfies its mean-square bound. beta is the declared bias norm.
  virtual double declared_alpha(double snr) const = 0;
  virtual double declared_beta() const { return 0.0; }

  virtual std::vector<double> encode(const std::vector<double>& grad, std::uint64_t iteration) = 0;
  virtual std::vector<double> decode(const std::vector<double>& received, std::uint64_t iteration) = 0;

  // Largest |noise| on a given channel use below which min-distance
  // demodulation is exact. Analog uses have no threshold.
  virtual double demod_margin(std::size_t use_index) const {
    (void)use_index;
    return std::numeric_limits<double>::infinity();
  }

  // Ground-truth comparison: does min-distance demodulation of `received`
  // disagree with the transmitted symbols in `sent`? Analog codes never
  // demodulate, so never err in this sense.
  virtual bool demod_error(const std::vector<double>& sent,
                           const std::vector<double>& received) const {
    (void)sent;
    (void)received;
    return false;
  }
};

}  // namespace ota
