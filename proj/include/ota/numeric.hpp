#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ota {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(squared_norm(a)); }

inline std::size_t next_pow2(std::size_t n) {
  if (n == 0) throw std::invalid_argument("next_pow2: n must be positive");
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Linear-interpolation quantile on a sorted copy (R type 7). q in [0, 1].
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

inline double median(const std::vector<double>& v) { return quantile(v, 0.5); }

inline double interquartile_range(const std::vector<double>& v) {
  return quantile(v, 0.75) - quantile(v, 0.25);
}

// Iterated-log count: smallest number of ln applications taking a below 1.
inline int ln_star(double a) {
  if (!(a == a)) throw std::invalid_argument("ln_star: nan");
  int count = 0;
  while (a >= 1.0) {
    a = std::log(a);
    ++count;
  }
  return count;
}

// Tower e^(e^(...)) of height i, with height 0 defined as 1.
// Overflows to +inf for i >= 5; callers clamp.
inline double exp_tower(int i) {
  if (i < 0) throw std::invalid_argument("exp_tower: negative height");
  double v = 1.0;
  for (int k = 0; k < i; ++k) v = std::exp(v);
  return v;
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: bad input");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate x");
  return sxy / sxx;
}

// One-sided binomial tail P(X >= wins) for X ~ Bin(n, 1/2).
inline double binomial_tail_half(int wins, int n) {
  if (n < 0 || wins < 0 || wins > n) throw std::invalid_argument("binomial_tail_half: bad args");
  // log C(n, k) via lgamma keeps n in the hundreds exact enough.
  double tail = 0.0;
  for (int k = wins; k <= n; ++k) {
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    tail += std::exp(lc - n * std::log(2.0));
  }
  return std::min(tail, 1.0);
}

}  // namespace ota
