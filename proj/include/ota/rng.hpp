#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace ota {

// SplitMix64 finalizer. Used both as the seed-derivation hash and to spread
// user seeds before feeding mt19937_64. Stable by construction; the exact
// constants are part of the reproducibility contract documented in README.md.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derive a child seed from a parent seed and a tag (stream id, iteration,
// cell coordinate...). Chaining derive_seed calls gives a stable tree of
// independent streams.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  return splitmix64(parent ^ splitmix64(tag));
}

// Deterministic random stream: mt19937_64 engine, explicit draw counter,
// Box-Muller gaussians (trig form, no cached second value) so that every
// draw count is a fixed function of what was requested.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)), draws_(0) {}

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }

  // Uniform in (0, 1]; never returns 0 so log() below stays finite.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, two uniforms per sample.
  double gaussian() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double gaussian(double stddev) { return stddev * gaussian(); }

  // Unbiased integer in [0, n) via masked rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    if (n == 1) return 0;
    std::uint64_t mask = n - 1;
    mask |= mask >> 1; mask |= mask >> 2; mask |= mask >> 4;
    mask |= mask >> 8; mask |= mask >> 16; mask |= mask >> 32;
    std::uint64_t v;
    do { v = next_u64() & mask; } while (v >= n);
    return v;
  }

  double sign() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

  std::uint64_t draw_count() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_;
};

}  // namespace ota
