#pragma once

#include <cstdint>
#include <vector>

#include "ota/code.hpp"
#include "ota/rng.hpp"

namespace ota {

// One-dimensional amplitude-shift-keying constellation: 2^bits points evenly
// spaced across [-sqrt(P), sqrt(P)], endpoints included.
struct AskConfig {
  int bits;
  double power;

  static AskConfig make(int bits, double power);

  std::uint64_t points() const { return std::uint64_t{1} << bits; }
  double amplitude() const;  // sqrt(P)
  double spacing() const;    // 2 sqrt(P) / (2^bits - 1)
};

// index -> constellation point. Endpoint indices map to exactly -sqrt(P) and
// +sqrt(P); every point satisfies |symbol| <= sqrt(P).
double ask_modulate(std::uint64_t index, const AskConfig& cfg);

// Nearest constellation point, computed in the index domain (no enumeration,
// stable at large bit widths). Exact midpoints resolve to the lower index.
std::uint64_t ask_demodulate(double y, const AskConfig& cfg);

// Largest integer rate r with spacing wide enough that the per-symbol noise
// bound exp(-2 snr / (2^r - 1)^2) stays below n_uses^{-1/2}; clamped to >= 1.
// n_uses may be any real >= 2.
int bits_for_snr(double snr, double n_uses);

// Shape quantizer configuration: nested symmetric intervals whose widths grow
// by tetra-iteration, k_s uniform levels per interval, and a subsample of
// mu_d of the d' rotated coordinates packed into ASK symbols.
struct RatqConfig {
  std::size_t padded_dim;  // d', power of two
  int ks;                  // levels per coordinate, power of two >= 2
  int hs;                  // interval count, power of two >= 1
  int log2_ks;
  int log2_hs;
  std::vector<double> ladder;  // ladder[j] = M_{j+1}, nondecreasing, back() >= 1
  int rate_bits;               // per-symbol bit budget r
  std::size_t mu_d;            // sampled coordinates
  bool split;                  // level and interval blocks in separate symbols

  // mu_d = min(d', ceil(r / coord_bits)) in combined mode; in split mode the
  // largest mu_d whose level and interval blocks each fit in r bits.
  // hs_override = 0 derives hs from the iterated-log formula.
  static RatqConfig make(std::size_t padded_dim, int rate_bits, int ks = 8, bool split = false,
                         int hs_override = 0);

  int coord_bits() const { return log2_ks + log2_hs; }
  int level_block_bits() const { return static_cast<int>(mu_d) * log2_ks; }
  int interval_block_bits() const { return static_cast<int>(mu_d) * log2_hs; }
  int payload_bits() const { return level_block_bits() + interval_block_bits(); }
  // Constellation widths of the shape symbols, in codeword order.
  std::vector<int> symbol_bit_widths() const;
};

// Quantizer output for the sampled coordinates. Indices are stored 0-based:
// interval_idx[i] selects ladder rung M_{interval_idx[i]+1}, level_idx[i] the
// uniform level within it.
struct QuantizedShape {
  std::vector<int> interval_idx;
  std::vector<int> level_idx;
  std::vector<std::size_t> sample;  // ascending indices into [0, d')
};

// Level value: the level_idx-th of ks points evenly spaced on [-M, M] where
// M is the interval_idx-th ladder rung.
double ratq_level_value(int interval_idx, int level_idx, const RatqConfig& cfg);

// Ascending mu_d-subset of [0, padded) drawn from the shared stream. Encoder
// and decoder call this at the same stream position to stay synchronized.
std::vector<std::size_t> draw_subsample(Rng& shared, std::size_t padded, std::size_t mu_d);

// Quantizes a rotated vector (length d', norm <= 1): draws the sample set
// from `shared`, picks per coordinate the smallest covering interval, and
// stochastically rounds to one of the two bracketing levels using `priv`
// (round up with probability proportional to proximity; exact levels are
// kept deterministically).
QuantizedShape ratq_quantize(const std::vector<double>& rotated, const RatqConfig& cfg,
                             Rng& shared, Rng& priv);

// Length-d' vector with sampled coordinates set to level value times d'/mu_d
// (the unbiasing upweight) and unsampled coordinates zero. Caller applies the
// inverse rotation.
std::vector<double> ratq_dequantize(const QuantizedShape& q, const RatqConfig& cfg);

// Block packing of the quantizer indices: all level indices first, then all
// interval indices, coordinate-major, most significant bits first.
std::uint64_t pack_level_block(const QuantizedShape& q, const RatqConfig& cfg);
std::uint64_t pack_interval_block(const QuantizedShape& q, const RatqConfig& cfg);
std::uint64_t pack_shape_bits(const QuantizedShape& q, const RatqConfig& cfg);
// Inverse of pack_shape_bits. The sample set is not recoverable from bits and
// is left empty for the caller to fill.
QuantizedShape unpack_shape_bits(std::uint64_t index, const RatqConfig& cfg);
QuantizedShape unpack_shape_blocks(std::uint64_t level_block, std::uint64_t interval_block,
                                   const RatqConfig& cfg);

// The gain rides the channel as a plain scaled real (one use, no
// constellation): encode multiplies by sqrt(P)/B, decode inverts.
double gain_encode(double gain, double bound, double power);
double gain_decode(double y, double bound, double power);

// Quantize-and-modulate gradient code: the norm is sent on an analog gain
// use, the unit-norm shape is rotated, subsampled, quantized, and sent as
// ASK symbols. Codeword order: shape symbol(s), then gain.
class GainShapeCode : public GradientCode {
 public:
  GainShapeCode(std::size_t dim, double bound, double power, int rate_bits,
                std::uint64_t shared_seed, std::uint64_t private_seed, int ks = 8,
                bool split = false, int hs_override = 0);

  std::size_t dim() const override { return dim_; }
  std::size_t channel_uses() const override { return shape_asks_.size() + 1; }
  double declared_alpha(double snr) const override;

  std::vector<double> encode(const std::vector<double>& grad, std::uint64_t iteration) override;
  std::vector<double> decode(const std::vector<double>& received, std::uint64_t iteration) override;

  double demod_margin(std::size_t use_index) const override;
  bool demod_error(const std::vector<double>& sent,
                   const std::vector<double>& received) const override;

  const RatqConfig& ratq() const { return ratq_; }
  const std::vector<AskConfig>& shape_asks() const { return shape_asks_; }

 private:
  std::size_t dim_;
  double bound_;
  double power_;
  std::uint64_t shared_seed_;
  std::uint64_t private_seed_;
  RatqConfig ratq_;
  std::vector<AskConfig> shape_asks_;
};

}  // namespace ota
