#pragma once

#include <cstdint>
#include <vector>

#include "ota/code.hpp"
#include "ota/rotation.hpp"

namespace ota {

// Uncoded analog transmission: each gradient coordinate is scaled onto its own
// channel use so a gradient with ||g||^2 <= B^2 meets the average power
// constraint with equality in the worst case. Decoding inverts the scale.
class ScaledAnalogCode : public GradientCode {
 public:
  // bound: mean-square gradient bound B. power: per-use power budget P.
  ScaledAnalogCode(std::size_t dim, double bound, double power);

  std::size_t dim() const override { return dim_; }
  std::size_t channel_uses() const override { return dim_; }
  double declared_alpha(double snr) const override;

  std::vector<double> encode(const std::vector<double>& grad, std::uint64_t iteration) override;
  std::vector<double> decode(const std::vector<double>& received, std::uint64_t iteration) override;

 private:
  std::size_t dim_;
  double bound_;
  double power_;
  double scale_;  // sqrt(P d) / B
};

// Analog transmission over fewer channel uses than dimensions: rotate by a
// fresh randomized Hadamard operator each iteration (seeded from shared
// randomness, so the decoder reproduces it), send a uniform subsample of the
// rotated coordinates, and unbiasedly upscale the rest back to zero.
class SampledAnalogCode : public GradientCode {
 public:
  // uses: number of channel uses per gradient (1 <= uses <= padded dim).
  SampledAnalogCode(std::size_t dim, std::size_t uses, double bound, double power,
                    std::uint64_t shared_seed);

  std::size_t dim() const override { return dim_; }
  std::size_t channel_uses() const override { return uses_; }
  double declared_alpha(double snr) const override;

  std::vector<double> encode(const std::vector<double>& grad, std::uint64_t iteration) override;
  std::vector<double> decode(const std::vector<double>& received, std::uint64_t iteration) override;

 private:
  struct IterationDraw {
    std::vector<double> signs;
    std::vector<std::size_t> sample;  // `uses_` distinct indices into [0, padded)
  };
  IterationDraw draw_for(std::uint64_t iteration) const;

  std::size_t dim_;
  std::size_t padded_;
  std::size_t uses_;
  double bound_;
  double power_;
  std::uint64_t shared_seed_;
};

}  // namespace ota
