#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ota/analog_codes.hpp"
#include "ota/bounds.hpp"
#include "ota/digital_codes.hpp"
#include "ota/harness.hpp"
#include "ota/numeric.hpp"
#include "ota/optimizer.hpp"
#include "ota/rotation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPower = 2;
constexpr int kExitIo = 3;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

std::string cell_or_empty(const ota::RateResult& r) {
  return r.valid ? fmt_g(r.value) : std::string();
}

int cmd_run(const std::string& config_path, const std::string& out_override, int threads,
            std::uint64_t seed_override, bool has_seed, bool overlay) {
  ota::ExperimentConfig cfg = ota::load_experiment_config(config_path);
  if (!out_override.empty()) cfg.out_path = out_override;
  if (has_seed) cfg.master_seed = seed_override;
  if (overlay) cfg.overlay = true;

  const ota::SweepResult result = ota::run_sweep(cfg, threads);
  ota::write_csv(result, cfg.out_path);

  std::size_t written = 0;
  for (const ota::CellStats& c : result.cells)
    if (!c.skipped) ++written;
  std::cerr << "wrote " << cfg.out_path << " (" << written << " of " << result.cells.size()
            << " cells)\n";
  if (result.power_violation) {
    std::cerr << "average transmit power exceeded the constraint in at least one cell\n";
    return kExitPower;
  }
  return kExitOk;
}

int cmd_bounds(std::size_t d, double n, const std::vector<std::string>& snr_tokens,
               double diameter, double bound, std::size_t k, const std::string& out_path) {
  std::vector<double> snrs;
  for (const std::string& tok : snr_tokens) snrs.push_back(ota::parse_snr_token(tok));
  if (snrs.empty()) throw ota::ConfigError("bounds: at least one --snr value is required");

  std::ostringstream out;
  out << "snr_linear,classic,general_lower,analog_upper,analog_lower,ask_upper_ideal,"
         "ask_upper,kcs_lower,analog_factor,digital_ideal_factor,winner\n";
  const std::vector<ota::CrossoverRow> table = ota::crossover_table(d, n, snrs);
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    ota::RateQuery q;
    q.n = n;
    q.d = d;
    q.snr = snrs[i];
    q.diameter = diameter;
    q.bound = bound;
    q.k = k;
    out << fmt_g(q.snr) << ',' << fmt_g(ota::classic_rate(q).value) << ','
        << cell_or_empty(ota::general_lower(q)) << ',' << cell_or_empty(ota::analog_upper(q))
        << ',' << cell_or_empty(ota::analog_lower(q)) << ','
        << cell_or_empty(ota::ask_upper_ideal(q)) << ',' << cell_or_empty(ota::ask_upper(q))
        << ',' << cell_or_empty(ota::kcs_lower(q)) << ',' << fmt_g(table[i].analog_factor) << ','
        << fmt_g(table[i].digital_ideal_factor) << ',' << table[i].winner << '\n';
  }

  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ota::IoError(out_path + ": cannot open for writing");
    f << out.str();
    if (!f) throw ota::IoError(out_path + ": write failed");
  }
  return kExitOk;
}

int cmd_measure(const std::string& scheme_label, std::size_t d, const std::string& snr_token,
                std::uint64_t n, int rate, std::size_t uses, int trials, bool force,
                double power, std::uint64_t seed) {
  const double snr = ota::parse_snr_token(snr_token);
  ota::SchemeSpec scheme;
  scheme.label = scheme_label;
  if (scheme_label == "scaled-analog") {
    scheme.kind = ota::SchemeKind::ScaledAnalog;
  } else if (scheme_label == "sampled-analog") {
    scheme.kind = ota::SchemeKind::SampledAnalog;
    scheme.sampled_uses = uses == 0 ? std::max<std::size_t>(1, d / 4) : uses;
  } else if (scheme_label == "digital-ask") {
    scheme.kind = ota::SchemeKind::DigitalAsk;
    scheme.rate_bits = rate;
  } else if (scheme_label == "noiseless-baseline") {
    scheme.kind = ota::SchemeKind::NoiselessBaseline;
  } else {
    throw ota::ConfigError("unknown scheme '" + scheme_label + "'");
  }

  ota::ProblemSpec pspec;
  pspec.d = d;
  const ota::ConvexProblem problem = ota::build_problem(pspec, seed);
  const ota::ChannelSpec channel = ota::build_channel(scheme, problem, power, snr);
  const std::unique_ptr<ota::GradientCode> code =
      ota::build_code(scheme, problem, power, snr, n, seed);
  const ota::CodeQuality q =
      ota::measure_code_quality(*code, problem, channel, trials, force, seed);

  const double alpha = code->declared_alpha(channel.snr());
  std::cout << "scheme=" << scheme_label << " d=" << d << " snr=" << fmt_g(snr)
            << " uses=" << code->channel_uses() << " trials=" << trials << "\n";
  std::cout << "bias_norm=" << fmt_g(q.bias_norm) << "\n";
  std::cout << "alpha_hat_sq=" << fmt_g(q.alpha_hat_sq) << " declared_alpha_sq="
            << fmt_g(alpha * alpha) << "\n";
  std::cout << "avg_power=" << fmt_g(q.avg_power) << " budget=" << fmt_g(channel.power) << "\n";
  return kExitOk;
}

bool check(const char* name, bool ok, int& failures) {
  std::cout << (ok ? "[ok]   " : "[fail] ") << name << "\n";
  if (!ok) ++failures;
  return ok;
}

int cmd_selftest() {
  int failures = 0;

  {
    ota::Rng rng(7);
    ota::RotationOperator rot(8, rng);
    double max_err = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      std::vector<double> e(8, 0.0);
      e[i] = 1.0;
      const std::vector<double> back = rot.inverse_rotate(rot.rotate(e));
      for (std::size_t j = 0; j < 8; ++j)
        max_err = std::max(max_err, std::fabs(back[j] - e[j]));
    }
    check("rotation round trip", max_err < 1e-9, failures);
  }

  {
    const ota::AskConfig ask = ota::AskConfig::make(6, 4.0);
    bool ok = true;
    for (std::uint64_t idx = 0; idx < ask.points(); ++idx)
      ok = ok && ota::ask_demodulate(ota::ask_modulate(idx, ask), ask) == idx;
    check("ask round trip", ok, failures);
  }

  {
    const ota::RatqConfig cfg = ota::RatqConfig::make(64, 12);
    bool ok = true;
    const std::uint64_t limit = std::uint64_t{1} << cfg.payload_bits();
    for (std::uint64_t bits = 0; bits < limit && bits < 4096; ++bits) {
      ok = ok && ota::pack_shape_bits(ota::unpack_shape_bits(bits, cfg), cfg) == bits;
    }
    check("shape payload pack/unpack", ok, failures);
  }

  {
    const ota::ConvexProblem problem =
        ota::ConvexProblem::hard_abs(8, 2.0, 1.0, 0.15, ota::OracleKind::BernoulliHard);
    const ota::ChannelSpec channel = ota::ChannelSpec::from_snr(1.0, 1.0);
    ota::ScaledAnalogCode code(8, 1.0, 1.0);
    ota::RunConfig rc;
    rc.problem = &problem;
    rc.code = &code;
    rc.channel = channel;
    rc.total_uses = 1 << 10;
    rc.seed = 99;
    const double gap_a = ota::psgd_run(rc).gap;
    const double gap_b = ota::psgd_run(rc).gap;
    check("optimizer determinism", gap_a == gap_b, failures);
  }

  {
    ota::ExperimentConfig cfg;
    cfg.problem.d = 4;
    ota::SchemeSpec s;
    s.kind = ota::SchemeKind::ScaledAnalog;
    s.label = "scaled-analog";
    cfg.schemes.push_back(s);
    cfg.snr_grid = {1.0};
    cfg.n_grid = {1 << 8};
    cfg.reps = 2;
    cfg.measure_trials = 10000;
    const std::string a = ota::render_csv(ota::run_sweep(cfg, 1));
    const std::string b = ota::render_csv(ota::run_sweep(cfg, 2));
    check("sweep thread invariance", a == b && !a.empty(), failures);
  }

  if (failures > 0) {
    std::cout << failures << " self test(s) failed\n";
    return 1;
  }
  std::cout << "all self tests passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"over-the-air stochastic optimization sweeps"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_override;
  int threads = 0;
  std::uint64_t seed_override = 0;
  bool overlay = false;
  CLI::App* run = app.add_subcommand("run", "execute a sweep described by a config file");
  run->add_option("config", config_path, "INI config file")->required();
  run->add_option("--out", out_override, "override the output CSV path");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  CLI::Option* seed_opt = run->add_option("--seed", seed_override, "override the master seed");
  run->add_flag("--overlay", overlay, "emit the convergence bound column");

  // bounds
  std::size_t b_d = 64;
  double b_n = 16384.0;
  std::vector<std::string> b_snrs;
  double b_diam = 1.0, b_bound = 1.0;
  std::size_t b_k = 1;
  std::string b_out;
  CLI::App* bounds = app.add_subcommand("bounds", "tabulate convergence-rate factors");
  bounds->add_option("--d", b_d, "dimension");
  bounds->add_option("--n", b_n, "channel-use budget");
  bounds->add_option("--snr", b_snrs, "snr values (linear or dB)")->required();
  bounds->add_option("--diameter", b_diam, "domain diameter");
  bounds->add_option("--bound", b_bound, "gradient norm bound");
  bounds->add_option("--k", b_k, "sparsity for the k-coordinate lower bound");
  bounds->add_option("--out", b_out, "write CSV here instead of stdout");

  // measure
  std::string m_scheme = "scaled-analog";
  std::size_t m_d = 64;
  std::string m_snr = "1";
  std::uint64_t m_n = 1 << 14;
  int m_rate = 0;
  std::size_t m_uses = 0;
  int m_trials = 100000;
  bool m_force = false;
  double m_power = 1.0;
  std::uint64_t m_seed = 1;
  CLI::App* measure = app.add_subcommand("measure", "estimate decoder bias and second moment");
  measure->add_option("--scheme", m_scheme, "scheme label");
  measure->add_option("--d", m_d, "dimension");
  measure->add_option("--snr", m_snr, "snr (linear or dB)");
  measure->add_option("--n", m_n, "budget used when auto-picking the digital rate");
  measure->add_option("--rate", m_rate, "digital bits per use (0 = auto)");
  measure->add_option("--uses", m_uses, "sampled-analog channel uses");
  measure->add_option("--trials", m_trials, "Monte-Carlo trials");
  measure->add_flag("--force-demod", m_force, "redraw noise until every use demodulates cleanly");
  measure->add_option("--power", m_power, "per-use power budget");
  measure->add_option("--seed", m_seed, "seed");

  CLI::App* selftest = app.add_subcommand("selftest", "run built-in smoke checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed())
      return cmd_run(config_path, out_override, threads, seed_override, seed_opt->count() > 0,
                     overlay);
    if (bounds->parsed())
      return cmd_bounds(b_d, b_n, b_snrs, b_diam, b_bound, b_k, b_out);
    if (measure->parsed())
      return cmd_measure(m_scheme, m_d, m_snr, m_n, m_rate, m_uses, m_trials, m_force, m_power,
                         m_seed);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const ota::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ota::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
