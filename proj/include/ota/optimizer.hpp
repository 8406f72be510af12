#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ota/channel.hpp"
#include "ota/code.hpp"
#include "ota/problems.hpp"

namespace ota {

// One projected-SGD run over the channel: query, encode, transmit, decode,
// step, project, average.
struct RunConfig {
  const ConvexProblem* problem = nullptr;
  GradientCode* code = nullptr;
  ChannelSpec channel{0.0, 1.0};
  std::uint64_t total_uses = 0;  // N
  // Engaged: use this learning rate (0 freezes the iterate at the start
  // point). Empty: D / (alpha sqrt(T)) with the code's declared alpha.
  std::optional<double> learning_rate;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

struct IterationTrace {
  std::vector<double> query;
  std::vector<double> estimate;
  double power;
  bool demod_err;
};

struct RunRecord {
  std::vector<double> average_iterate;
  double gap;
  std::uint64_t iterations;
  double learning_rate;
  PowerLedger ledger;
  std::uint64_t demod_error_count;
  double decode_error_rate;  // demod errors / iterations
  std::vector<IterationTrace> trace;
};

// D / (alpha sqrt(T)).
double default_learning_rate(double alpha, double diameter, std::uint64_t iterations);

// Predicted worst-case gap D * (alpha / sqrt(n / uses_per_query) + beta) for
// a code with declared second-moment root alpha and bias beta.
double lemma1_bound(double alpha, double beta, double diameter, double total_uses,
                    double uses_per_query);

RunRecord psgd_run(const RunConfig& cfg);

}  // namespace ota
