#include "ota/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ota/numeric.hpp"

namespace ota {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_common(const RateQuery& q) {
  if (!(q.n >= 1.0)) throw std::invalid_argument("RateQuery: n must be >= 1");
  if (!(q.d >= 1.0)) throw std::invalid_argument("RateQuery: d must be >= 1");
  if (!(q.diameter > 0.0) || !(q.bound > 0.0) || !(q.constant > 0.0))
    throw std::invalid_argument("RateQuery: diameter, bound, constant must be positive");
}

double classic_value(const RateQuery& q) {
  return q.constant * q.diameter * q.bound / std::sqrt(q.n);
}

RateResult invalid(const std::string& note) { return RateResult{kNan, false, note}; }

}  // namespace

RateResult classic_rate(const RateQuery& q) {
  check_common(q);
  return RateResult{classic_value(q), true, "classic benchmark"};
}

RateResult general_lower(const RateQuery& q) {
  check_common(q);
  if (!(q.snr > 0.0)) throw std::invalid_argument("general_lower: snr must be positive");
  const double cap = std::log2(1.0 + q.snr);
  if (!(q.n * cap >= q.d))
    return invalid("needs n >= d / log2(1+snr)");
  const double denom = std::min(q.d, 0.5 * cap);
  return RateResult{classic_value(q) * std::sqrt(q.d / denom), true, "general converse"};
}

RateResult analog_upper(const RateQuery& q) {
  check_common(q);
  if (!(q.snr > 0.0)) throw std::invalid_argument("analog_upper: snr must be positive");
  const double factor = std::sqrt(q.d + q.d / q.snr);
  return RateResult{classic_value(q) * factor, true, "scaled analog achievable"};
}

RateResult analog_lower(const RateQuery& q) {
  check_common(q);
  if (!(q.snr > 0.0)) throw std::invalid_argument("analog_lower: snr must be positive");
  if (!(q.n >= q.d * (1.0 + 1.0 / q.snr)))
    return invalid("needs n >= d (1 + 1/snr)");
  const double factor = std::sqrt(q.d + q.d / q.snr);
  return RateResult{classic_value(q) * factor, true, "analog converse"};
}

double real_rate_for_snr(double snr, double n) {
  if (!(snr > 0.0)) throw std::invalid_argument("real_rate_for_snr: snr must be positive");
  if (!(n >= 2.0)) throw std::invalid_argument("real_rate_for_snr: n must be >= 2");
  return std::log2(std::sqrt(4.0 * snr / std::log(n)) + 1.0);
}

RateResult ask_upper_ideal(const RateQuery& q) {
  check_common(q);
  if (!(q.n >= 2.0)) return invalid("needs n >= 2 for the rate choice");
  const double r = real_rate_for_snr(q.snr, q.n);
  const double denom = std::min(q.d, r);
  return RateResult{2.0 * classic_value(q) * std::sqrt(q.d / denom), true,
                    "idealized quantizer achievable"};
}

RateResult ask_upper(const RateQuery& q) {
  check_common(q);
  if (!(q.n >= 2.0)) return invalid("needs n >= 2 for the rate choice");
  if (ln_star(q.d / 3.0) > 7) return invalid("needs iterated-log(d/3) <= 7");
  const double r = real_rate_for_snr(q.snr, q.n);
  if (!(r >= 6.0)) return invalid("needs rate >= 6");
  const double denom = std::min(q.d, r / 48.0);
  return RateResult{2.0 * classic_value(q) * std::sqrt(q.d / denom), true,
                    "quantize-and-modulate achievable"};
}

RateResult kcs_lower(const RateQuery& q) {
  check_common(q);
  if (!(q.k >= 1.0) || !(q.k <= q.d))
    throw std::invalid_argument("kcs_lower: k must lie in [1, d]");
  double budget;
  if (q.k == q.d) {
    budget = q.k * std::log2(q.d / q.k) + q.k * (1.0 + std::log2(std::exp(1.0)));
  } else {
    budget = q.k * std::log2(q.d / q.k);
  }
  const double denom = std::min(q.d, budget);
  return RateResult{classic_value(q) * std::sqrt(q.d / denom), true,
                    "coordinate-sampling converse"};
}

std::vector<CrossoverRow> crossover_table(double d, double n,
                                          const std::vector<double>& snr_grid) {
  if (!(d >= 1.0)) throw std::invalid_argument("crossover_table: d must be >= 1");
  if (!(n >= 2.0)) throw std::invalid_argument("crossover_table: n must be >= 2");
  std::vector<CrossoverRow> rows;
  rows.reserve(snr_grid.size());
  for (double snr : snr_grid) {
    if (!(snr > 0.0)) throw std::invalid_argument("crossover_table: snr must be positive");
    const double r = real_rate_for_snr(snr, n);
    CrossoverRow row;
    row.snr = snr;
    row.analog_factor = std::sqrt(d + d / snr);
    row.digital_factor = 2.0 * std::sqrt(d / std::min(d, r / 48.0));
    row.digital_ideal_factor = 2.0 * std::sqrt(d / std::min(d, r));
    row.winner = row.analog_factor <= row.digital_ideal_factor ? "analog" : "digital";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ota
