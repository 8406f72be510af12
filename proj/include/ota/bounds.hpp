#pragma once

#include <string>
#include <vector>

namespace ota {

// Inputs for the closed-form convergence-rate formulas. Universal constants
// are unspecified in the underlying analysis; `constant` scales every result
// (1 = unit mode).
struct RateQuery {
  double n = 0.0;    // channel-use budget N
  double d = 0.0;    // dimension
  double snr = 0.0;  // linear
  double diameter = 1.0;
  double bound = 1.0;  // oracle mean-square root B
  double k = 0.0;      // coordinate-sampling parameter (kcs_lower only)
  double constant = 1.0;
};

// A formula value plus its validity: outside a formula's regime the result is
// flagged invalid with a reason instead of pretending to be a number.
struct RateResult {
  double value;
  bool valid;
  std::string note;
};

// Baseline without a channel: D*B/sqrt(N).
RateResult classic_rate(const RateQuery& q);

// Converse for any coding scheme: classic times sqrt(d / min{d, log2(1+snr)/2}).
// Needs n >= d / log2(1+snr).
RateResult general_lower(const RateQuery& q);

// Scaled analog transmission: classic times sqrt(d + d/snr). The same factor
// is also a converse for analog schemes (analog_lower), valid for
// n >= d (1 + 1/snr).
RateResult analog_upper(const RateQuery& q);
RateResult analog_lower(const RateQuery& q);

// Real-valued rate choice log2(sqrt(4 snr / ln n) + 1) used by the digital
// upper bounds.
double real_rate_for_snr(double snr, double n);

// Quantize-and-modulate with an idealized shape quantizer:
// 2 * classic * sqrt(d / min{d, r}).
RateResult ask_upper_ideal(const RateQuery& q);
// Same pipeline with the constructed quantizer: 2 * classic *
// sqrt(d / min{d, r/48}); needs iterated-log(d/3) <= 7 and r >= 6.
RateResult ask_upper(const RateQuery& q);

// Converse for codes that sample k of d coordinates, any snr: classic times
// sqrt(d / min{d, k log2(d/k)}). At k = d the zero denominator is replaced by
// the proof's envelope k log2(d/k) + k (1 + log2 e).
RateResult kcs_lower(const RateQuery& q);

struct CrossoverRow {
  double snr;
  double analog_factor;         // sqrt(d + d/snr)
  double digital_factor;        // 2 sqrt(d / min{d, r/48})
  double digital_ideal_factor;  // 2 sqrt(d / min{d, r})
  std::string winner;           // smaller of analog vs digital_ideal
};

// Slowdown factors over the classic rate across an snr grid, for locating the
// analog/digital crossover.
std::vector<CrossoverRow> crossover_table(double d, double n, const std::vector<double>& snr_grid);

}  // namespace ota
