#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ota/channel.hpp"
#include "ota/code.hpp"
#include "ota/problems.hpp"

namespace ota {

// Configuration problem (bad file, bad value, bad combination). Carries
// "path:line: message" context where available.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem trouble (unreadable input, unwritable output).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- config file -----------------------------------------------------------

struct IniValue {
  std::string text;
  int line;
};

struct IniSection {
  std::map<std::string, IniValue> entries;
  int line;
};

struct IniFile {
  std::string path;
  std::map<std::string, IniSection> sections;
};

// Sections in brackets, key = value pairs, # or ; comments, blank lines
// ignored. Duplicate sections/keys and malformed lines are errors.
IniFile parse_ini_text(const std::string& text, const std::string& path);
IniFile parse_ini_file(const std::string& path);

// "0.5" (linear) or "-10dB" (converted as 10^(v/10)).
double parse_snr_token(const std::string& token);
// "16384" or the sugar "2^14".
std::uint64_t parse_count_token(const std::string& token);

// --- experiment description -------------------------------------------------

enum class SchemeKind { ScaledAnalog, SampledAnalog, DigitalAsk, NoiselessBaseline };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::ScaledAnalog;
  std::string label;
  std::size_t sampled_uses = 0;  // sampled-analog: channel uses per query
  int rate_bits = 0;             // digital-ask: 0 means derive from snr and N
  int ks = 8;
  bool split = false;
  int hs_override = 0;
};

struct ProblemSpec {
  std::string kind = "hard-abs";  // hard-abs | quadratic
  std::size_t d = 64;
  double diameter = 2.0;
  double bound = 1.0;  // quadratic: 0 means tight (exact oracle)
  double delta = 0.15;
  OracleKind oracle = OracleKind::BernoulliHard;
  std::size_t quad_rows = 0;  // quadratic: 0 means d
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<SchemeSpec> schemes;
  std::vector<double> snr_grid;
  std::vector<std::uint64_t> n_grid;
  int reps = 10;
  double power = 1.0;
  std::uint64_t master_seed = 1;
  std::string out_path = "results.csv";
  bool overlay = false;
  int measure_trials = 10000;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const IniFile& ini);

// --- seeding ----------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& s);
// Cell seed chain: master -> scheme label (FNV hash) -> snr (bit pattern) ->
// N. Every per-rep and per-purpose stream derives from this value, so a cell
// depends only on its coordinates.
std::uint64_t cell_seed(std::uint64_t master, const std::string& label, double snr,
                        std::uint64_t n);

// --- construction -----------------------------------------------------------

ConvexProblem build_problem(const ProblemSpec& spec, std::uint64_t master_seed);
ChannelSpec build_channel(const SchemeSpec& scheme, const ConvexProblem& problem, double power,
                          double snr);
// run_seed feeds the code's shared/private randomness streams; pass the
// per-rep seed so repetitions are independent.
std::unique_ptr<GradientCode> build_code(const SchemeSpec& scheme, const ConvexProblem& problem,
                                         double power, double snr, std::uint64_t n,
                                         std::uint64_t run_seed);

// --- measurement ------------------------------------------------------------

struct CodeQuality {
  double bias_norm;
  double alpha_hat_sq;
  double avg_power;
};

// Monte-Carlo estimate of the decode bias and second moment at the oracle's
// distribution at the domain center. force_correct_demod redraws channel
// noise until every use lies inside the code's demodulation margin.
CodeQuality measure_code_quality(GradientCode& code, const ConvexProblem& problem,
                                 const ChannelSpec& channel, int trials, bool force_correct_demod,
                                 std::uint64_t seed);

// --- sweep ------------------------------------------------------------------

struct CellStats {
  std::string scheme;
  double snr;
  std::size_t d;
  std::uint64_t n;
  std::uint64_t seed_group;
  int reps;
  double gap_median;
  double gap_mean;
  double gap_iqr;
  double bias_norm;
  double alpha_hat_sq;
  double avg_power;
  double decode_err_rate;
  std::optional<double> bound_overlay;
  bool power_ok;
  bool skipped;
  std::string skip_reason;
};

struct SweepResult {
  std::vector<CellStats> cells;  // grid order: scheme, then snr, then N
  bool power_violation = false;
};

// Executes every (scheme, snr, N) cell with `reps` repetitions each.
// threads <= 0 picks the hardware concurrency. Infeasible cells (budget below
// one query) are marked skipped. Deterministic output for a fixed config
// regardless of thread count.
SweepResult run_sweep(const ExperimentConfig& cfg, int threads);

// CSV with the fixed header
// scheme,snr_linear,d,N,seed_group,reps,gap_median,gap_mean,gap_iqr,
// bias_norm,alpha_hat_sq,avg_power,decode_err_rate,bound_overlay
// one row per non-skipped cell, %.12g numbers, byte-stable.
std::string render_csv(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);

}  // namespace ota
