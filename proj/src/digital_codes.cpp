#include "ota/digital_codes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ota/numeric.hpp"
#include "ota/rotation.hpp"

namespace ota {

namespace {
constexpr int kMaxPackBits = 52;  // packed indices stay exact in a double
constexpr double kLadderCap = 1e30;
}  // namespace

AskConfig AskConfig::make(int bits, double power) {
  if (bits < 1 || bits > kMaxPackBits)
    throw std::invalid_argument("AskConfig: bits must be in [1, 52]");
  if (!(power > 0.0)) throw std::invalid_argument("AskConfig: power must be positive");
  return AskConfig{bits, power};
}

double AskConfig::amplitude() const { return std::sqrt(power); }

double AskConfig::spacing() const {
  return 2.0 * amplitude() / static_cast<double>(points() - 1);
}

double ask_modulate(std::uint64_t index, const AskConfig& cfg) {
  if (index >= cfg.points()) throw std::invalid_argument("ask_modulate: index out of range");
  const double last = static_cast<double>(cfg.points() - 1);
  // 2*(index/last) - 1 hits -1 and +1 exactly at the endpoints, so the power
  // guarantee |symbol| <= sqrt(P) holds with no rounding slack.
  return cfg.amplitude() * (2.0 * (static_cast<double>(index) / last) - 1.0);
}

std::uint64_t ask_demodulate(double y, const AskConfig& cfg) {
  const double last = static_cast<double>(cfg.points() - 1);
  const double t = (y / cfg.amplitude() + 1.0) * 0.5 * last;
  // ceil(t - 0.5) is nearest-with-ties-down: an exact midpoint picks the
  // lower index.
  const double idx = std::ceil(t - 0.5);
  if (idx <= 0.0) return 0;
  if (idx >= last) return cfg.points() - 1;
  return static_cast<std::uint64_t>(idx);
}

int bits_for_snr(double snr, double n_uses) {
  if (!(snr > 0.0)) throw std::invalid_argument("bits_for_snr: snr must be positive");
  if (!(n_uses >= 2.0)) throw std::invalid_argument("bits_for_snr: n_uses must be >= 2");
  const double arg = std::sqrt(4.0 * snr / std::log(n_uses)) + 1.0;
  // Epsilon absorbs rounding when the formula lands exactly on an integer.
  const int r = static_cast<int>(std::floor(std::log2(arg) + 1e-9));
  return r < 1 ? 1 : r;
}

RatqConfig RatqConfig::make(std::size_t padded_dim, int rate_bits, int ks, bool split,
                            int hs_override) {
  if (padded_dim == 0 || !is_pow2(padded_dim))
    throw std::invalid_argument("RatqConfig: padded_dim must be a power of two");
  if (ks < 2 || !is_pow2(static_cast<std::size_t>(ks)))
    throw std::invalid_argument("RatqConfig: ks must be a power of two >= 2");
  if (rate_bits < 1 || rate_bits > kMaxPackBits)
    throw std::invalid_argument("RatqConfig: rate_bits must be in [1, 52]");

  RatqConfig cfg;
  cfg.padded_dim = padded_dim;
  cfg.ks = ks;
  cfg.log2_ks = 0;
  while ((1 << cfg.log2_ks) < ks) ++cfg.log2_ks;
  cfg.rate_bits = rate_bits;
  cfg.split = split;

  if (hs_override != 0) {
    if (hs_override < 1 || !is_pow2(static_cast<std::size_t>(hs_override)))
      throw std::invalid_argument("RatqConfig: hs must be a power of two >= 1");
    cfg.hs = hs_override;
  } else {
    const int target = 1 + ln_star(static_cast<double>(padded_dim) / 3.0);
    cfg.hs = 1;
    while (cfg.hs < target) cfg.hs <<= 1;
  }
  cfg.log2_hs = 0;
  while ((1 << cfg.log2_hs) < cfg.hs) ++cfg.log2_hs;

  cfg.ladder.resize(cfg.hs);
  const double base = 3.0 / static_cast<double>(padded_dim);
  for (int j = 0; j < cfg.hs; ++j)
    cfg.ladder[j] = std::min(std::sqrt(base * exp_tower(j)), kLadderCap);
  if (!(cfg.ladder.back() >= 1.0))
    throw std::invalid_argument("RatqConfig: top interval must cover unit-norm input");

  const int coord = cfg.coord_bits();
  if (split) {
    int cand = rate_bits / cfg.log2_ks;
    if (cfg.log2_hs > 0) cand = std::min(cand, rate_bits / cfg.log2_hs);
    if (cand < 1) cand = 1;
    cfg.mu_d = std::min(padded_dim, static_cast<std::size_t>(cand));
  } else {
    const std::size_t ceil_div = static_cast<std::size_t>((rate_bits + coord - 1) / coord);
    cfg.mu_d = std::min(padded_dim, ceil_div);
  }
  if (cfg.payload_bits() > kMaxPackBits)
    throw std::invalid_argument("RatqConfig: payload exceeds 52-bit packing");
  return cfg;
}

std::vector<int> RatqConfig::symbol_bit_widths() const {
  std::vector<int> widths;
  if (split) {
    widths.push_back(level_block_bits());
    if (interval_block_bits() > 0) widths.push_back(interval_block_bits());
  } else {
    widths.push_back(std::max(rate_bits, payload_bits()));
  }
  return widths;
}

double ratq_level_value(int interval_idx, int level_idx, const RatqConfig& cfg) {
  if (interval_idx < 0 || interval_idx >= cfg.hs)
    throw std::invalid_argument("ratq_level_value: interval index out of range");
  if (level_idx < 0 || level_idx >= cfg.ks)
    throw std::invalid_argument("ratq_level_value: level index out of range");
  const double m = cfg.ladder[static_cast<std::size_t>(interval_idx)];
  return m * (2.0 * (static_cast<double>(level_idx) / static_cast<double>(cfg.ks - 1)) - 1.0);
}

std::vector<std::size_t> draw_subsample(Rng& shared, std::size_t padded, std::size_t mu_d) {
  if (mu_d == 0 || mu_d > padded) throw std::invalid_argument("draw_subsample: bad cardinality");
  std::vector<std::size_t> perm(padded);
  for (std::size_t i = 0; i < padded; ++i) perm[i] = i;
  for (std::size_t i = 0; i < mu_d; ++i) {
    std::size_t j = i + static_cast<std::size_t>(shared.below(static_cast<std::uint64_t>(padded - i)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::size_t> sample(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(mu_d));
  std::sort(sample.begin(), sample.end());
  return sample;
}

QuantizedShape ratq_quantize(const std::vector<double>& rotated, const RatqConfig& cfg,
                             Rng& shared, Rng& priv) {
  if (rotated.size() != cfg.padded_dim)
    throw std::invalid_argument("ratq_quantize: input must have the padded length");
  QuantizedShape q;
  q.sample = draw_subsample(shared, cfg.padded_dim, cfg.mu_d);
  q.interval_idx.resize(cfg.mu_d);
  q.level_idx.resize(cfg.mu_d);
  for (std::size_t i = 0; i < cfg.mu_d; ++i) {
    const double w = rotated[q.sample[i]];
    const double aw = std::fabs(w);
    int j = 0;
    while (j < cfg.hs && aw > cfg.ladder[static_cast<std::size_t>(j)]) ++j;
    if (j == cfg.hs)
      throw std::runtime_error("ratq_quantize: coordinate exceeds the top interval");
    const double m = cfg.ladder[static_cast<std::size_t>(j)];
    const double pos = (w + m) * static_cast<double>(cfg.ks - 1) / (2.0 * m);
    int lo = static_cast<int>(std::floor(pos));
    if (lo > cfg.ks - 2) lo = cfg.ks - 2;
    if (lo < 0) lo = 0;
    const double frac = pos - static_cast<double>(lo);
    // One uniform per coordinate regardless of frac keeps the draw count a
    // fixed function of the config.
    const bool up = priv.uniform() < frac;
    q.interval_idx[i] = j;
    q.level_idx[i] = lo + (up ? 1 : 0);
  }
  return q;
}

std::vector<double> ratq_dequantize(const QuantizedShape& q, const RatqConfig& cfg) {
  if (q.sample.size() != cfg.mu_d || q.interval_idx.size() != cfg.mu_d ||
      q.level_idx.size() != cfg.mu_d)
    throw std::invalid_argument("ratq_dequantize: malformed quantized shape");
  std::vector<double> out(cfg.padded_dim, 0.0);
  const double upweight = static_cast<double>(cfg.padded_dim) / static_cast<double>(cfg.mu_d);
  for (std::size_t i = 0; i < cfg.mu_d; ++i) {
    if (q.sample[i] >= cfg.padded_dim)
      throw std::invalid_argument("ratq_dequantize: sample index out of range");
    out[q.sample[i]] = upweight * ratq_level_value(q.interval_idx[i], q.level_idx[i], cfg);
  }
  return out;
}

std::uint64_t pack_level_block(const QuantizedShape& q, const RatqConfig& cfg) {
  if (q.level_idx.size() != cfg.mu_d)
    throw std::invalid_argument("pack_level_block: wrong coordinate count");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < cfg.mu_d; ++i) {
    const int l = q.level_idx[i];
    if (l < 0 || l >= cfg.ks) throw std::invalid_argument("pack_level_block: level out of range");
    acc = (acc << cfg.log2_ks) | static_cast<std::uint64_t>(l);
  }
  return acc;
}

std::uint64_t pack_interval_block(const QuantizedShape& q, const RatqConfig& cfg) {
  if (q.interval_idx.size() != cfg.mu_d)
    throw std::invalid_argument("pack_interval_block: wrong coordinate count");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < cfg.mu_d; ++i) {
    const int j = q.interval_idx[i];
    if (j < 0 || j >= cfg.hs)
      throw std::invalid_argument("pack_interval_block: interval out of range");
    acc = (acc << cfg.log2_hs) | static_cast<std::uint64_t>(j);
  }
  return acc;
}

std::uint64_t pack_shape_bits(const QuantizedShape& q, const RatqConfig& cfg) {
  return (pack_level_block(q, cfg) << cfg.interval_block_bits()) | pack_interval_block(q, cfg);
}

QuantizedShape unpack_shape_blocks(std::uint64_t level_block, std::uint64_t interval_block,
                                   const RatqConfig& cfg) {
  if (level_block >> cfg.level_block_bits())
    throw std::invalid_argument("unpack_shape_blocks: level block out of range");
  if (cfg.interval_block_bits() < 64 && (interval_block >> cfg.interval_block_bits()))
    throw std::invalid_argument("unpack_shape_blocks: interval block out of range");
  QuantizedShape q;
  q.interval_idx.resize(cfg.mu_d);
  q.level_idx.resize(cfg.mu_d);
  const std::uint64_t kmask = static_cast<std::uint64_t>(cfg.ks - 1);
  const std::uint64_t hmask = static_cast<std::uint64_t>(cfg.hs - 1);
  for (std::size_t i = cfg.mu_d; i-- > 0;) {
    q.level_idx[i] = static_cast<int>(level_block & kmask);
    level_block >>= cfg.log2_ks;
    q.interval_idx[i] = static_cast<int>(interval_block & hmask);
    interval_block >>= cfg.log2_hs;
  }
  return q;
}

QuantizedShape unpack_shape_bits(std::uint64_t index, const RatqConfig& cfg) {
  if (index >> cfg.payload_bits())
    throw std::invalid_argument("unpack_shape_bits: index out of range");
  const std::uint64_t imask = (std::uint64_t{1} << cfg.interval_block_bits()) - 1;
  return unpack_shape_blocks(index >> cfg.interval_block_bits(), index & imask, cfg);
}

double gain_encode(double gain, double bound, double power) {
  if (!(bound > 0.0) || !(power > 0.0))
    throw std::invalid_argument("gain_encode: bound and power must be positive");
  if (!(gain >= 0.0)) throw std::invalid_argument("gain_encode: gain must be nonnegative");
  return gain * std::sqrt(power) / bound;
}

double gain_decode(double y, double bound, double power) {
  if (!(bound > 0.0) || !(power > 0.0))
    throw std::invalid_argument("gain_decode: bound and power must be positive");
  return y * bound / std::sqrt(power);
}

GainShapeCode::GainShapeCode(std::size_t dim, double bound, double power, int rate_bits,
                             std::uint64_t shared_seed, std::uint64_t private_seed, int ks,
                             bool split, int hs_override)
    : dim_(dim),
      bound_(bound),
      power_(power),
      shared_seed_(shared_seed),
      private_seed_(private_seed),
      ratq_(RatqConfig::make(next_pow2(dim), rate_bits, ks, split, hs_override)) {
  if (dim == 0) throw std::invalid_argument("GainShapeCode: dim must be positive");
  if (!(bound > 0.0)) throw std::invalid_argument("GainShapeCode: bound must be positive");
  if (!(power > 0.0)) throw std::invalid_argument("GainShapeCode: power must be positive");
  for (int w : ratq_.symbol_bit_widths()) shape_asks_.push_back(AskConfig::make(w, power));
}

double GainShapeCode::declared_alpha(double snr) const {
  if (!(snr > 0.0)) throw std::invalid_argument("declared_alpha: snr must be positive");
  const double inv_mu = static_cast<double>(ratq_.padded_dim) / static_cast<double>(ratq_.mu_d);
  const double ks1 = static_cast<double>(ratq_.ks - 1);
  const double shape_sq = inv_mu * (9.0 / (ks1 * ks1) + 1.0);
  return bound_ * std::sqrt((1.0 + 1.0 / snr) * shape_sq);
}

std::vector<double> GainShapeCode::encode(const std::vector<double>& grad,
                                          std::uint64_t iteration) {
  if (grad.size() != dim_) throw std::invalid_argument("encode: gradient has wrong dimension");
  const double gain = norm(grad);
  std::vector<double> shape(dim_, 0.0);
  if (gain > 0.0) {
    for (std::size_t i = 0; i < dim_; ++i) shape[i] = grad[i] / gain;
  }
  Rng shared(derive_seed(shared_seed_, iteration));
  RotationOperator rot(dim_, shared);
  const std::vector<double> rotated = rot.rotate(shape);
  Rng priv(derive_seed(private_seed_, iteration));
  const QuantizedShape q = ratq_quantize(rotated, ratq_, shared, priv);

  std::vector<double> out;
  out.reserve(channel_uses());
  if (ratq_.split) {
    out.push_back(ask_modulate(pack_level_block(q, ratq_), shape_asks_[0]));
    if (shape_asks_.size() > 1)
      out.push_back(ask_modulate(pack_interval_block(q, ratq_), shape_asks_[1]));
  } else {
    out.push_back(ask_modulate(pack_shape_bits(q, ratq_), shape_asks_[0]));
  }
  out.push_back(gain_encode(gain, bound_, power_));
  return out;
}

std::vector<double> GainShapeCode::decode(const std::vector<double>& received,
                                          std::uint64_t iteration) {
  if (received.size() != channel_uses())
    throw std::invalid_argument("decode: block has wrong length");
  Rng shared(derive_seed(shared_seed_, iteration));
  RotationOperator rot(dim_, shared);
  const std::vector<std::size_t> sample = draw_subsample(shared, ratq_.padded_dim, ratq_.mu_d);

  QuantizedShape q;
  if (ratq_.split) {
    std::uint64_t lvl = ask_demodulate(received[0], shape_asks_[0]);
    std::uint64_t itv = 0;
    if (shape_asks_.size() > 1) itv = ask_demodulate(received[1], shape_asks_[1]);
    q = unpack_shape_blocks(lvl, itv, ratq_);
  } else {
    std::uint64_t idx = ask_demodulate(received[0], shape_asks_[0]);
    // The constellation can be wider than the payload (rate above the packed
    // width); out-of-payload points snap to the top payload index.
    const std::uint64_t top = (std::uint64_t{1} << ratq_.payload_bits()) - 1;
    if (idx > top) idx = top;
    q = unpack_shape_bits(idx, ratq_);
  }
  q.sample = sample;
  std::vector<double> shape_hat = rot.inverse_rotate(ratq_dequantize(q, ratq_));
  shape_hat.resize(dim_);
  const double gain_hat = gain_decode(received.back(), bound_, power_);
  for (double& x : shape_hat) x *= gain_hat;
  return shape_hat;
}

double GainShapeCode::demod_margin(std::size_t use_index) const {
  if (use_index >= channel_uses()) throw std::invalid_argument("demod_margin: use out of range");
  if (use_index < shape_asks_.size()) return shape_asks_[use_index].spacing() / 2.0;
  return std::numeric_limits<double>::infinity();
}

bool GainShapeCode::demod_error(const std::vector<double>& sent,
                                const std::vector<double>& received) const {
  if (sent.size() != channel_uses() || received.size() != channel_uses())
    throw std::invalid_argument("demod_error: block has wrong length");
  for (std::size_t i = 0; i < shape_asks_.size(); ++i) {
    if (ask_demodulate(sent[i], shape_asks_[i]) != ask_demodulate(received[i], shape_asks_[i]))
      return true;
  }
  return false;
}

}  // namespace ota
