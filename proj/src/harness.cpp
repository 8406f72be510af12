#include "ota/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "ota/analog_codes.hpp"
#include "ota/digital_codes.hpp"
#include "ota/numeric.hpp"
#include "ota/optimizer.hpp"

namespace ota {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  out.erase(std::remove_if(out.begin(), out.end(), [](const std::string& t) { return t.empty(); }),
            out.end());
  return out;
}

[[noreturn]] void fail_at(const IniFile& ini, int line, const std::string& msg) {
  throw ConfigError(ini.path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& token) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + token + "'");
  }
  if (pos != token.size()) throw ConfigError("trailing characters in number: '" + token + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& token) {
  if (token.empty() || token[0] == '-') throw ConfigError("not a nonnegative integer: '" + token + "'");
  std::size_t pos = 0;
  unsigned long long v;
  try {
    v = std::stoull(token, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + token + "'");
  }
  if (pos != token.size()) throw ConfigError("trailing characters in integer: '" + token + "'");
  return v;
}

bool parse_bool(const std::string& token) {
  const std::string t = lower(token);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError("not a boolean: '" + token + "'");
}

}  // namespace

IniFile parse_ini_text(const std::string& text, const std::string& path) {
  IniFile ini;
  ini.path = path;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::size_t comment = raw.find_first_of("#;");
    std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(line_no) + ": empty section name");
      if (ini.sections.count(section))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate section [" +
                          section + "]");
      ini.sections[section] = IniSection{{}, line_no};
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected section header or key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw ConfigError(path + ":" + std::to_string(line_no) + ": key outside any section");
    auto& entries = ini.sections[section].entries;
    if (entries.count(key))
      throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    entries[key] = IniValue{value, line_no};
  }
  return ini;
}

IniFile parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini_text(buf.str(), path);
}

double parse_snr_token(const std::string& token) {
  const std::string t = trim(token);
  if (t.size() > 2) {
    const std::string tail = lower(t.substr(t.size() - 2));
    if (tail == "db") {
      const double db = parse_double(trim(t.substr(0, t.size() - 2)));
      return std::pow(10.0, db / 10.0);
    }
  }
  const double v = parse_double(t);
  if (!(v > 0.0)) throw ConfigError("snr must be positive: '" + token + "'");
  return v;
}

std::uint64_t parse_count_token(const std::string& token) {
  const std::string t = trim(token);
  if (t.rfind("2^", 0) == 0) {
    const std::uint64_t k = parse_u64(t.substr(2));
    if (k > 62) throw ConfigError("exponent too large: '" + token + "'");
    return std::uint64_t{1} << k;
  }
  const std::uint64_t v = parse_u64(t);
  if (v == 0) throw ConfigError("count must be positive: '" + token + "'");
  return v;
}

namespace {

OracleKind parse_oracle(const std::string& token) {
  const std::string t = lower(trim(token));
  if (t == "bernoulli") return OracleKind::BernoulliHard;
  if (t == "gaussian") return OracleKind::GaussianHard;
  if (t == "exact-gaussian") return OracleKind::ExactPlusGaussian;
  throw ConfigError("unknown oracle '" + token + "' (bernoulli | gaussian | exact-gaussian)");
}

SchemeKind parse_scheme_kind(const std::string& token) {
  if (token == "scaled-analog") return SchemeKind::ScaledAnalog;
  if (token == "sampled-analog") return SchemeKind::SampledAnalog;
  if (token == "digital-ask") return SchemeKind::DigitalAsk;
  if (token == "noiseless-baseline") return SchemeKind::NoiselessBaseline;
  throw ConfigError("unknown scheme '" + token +
                    "' (scaled-analog | sampled-analog | digital-ask | noiseless-baseline)");
}

}  // namespace

ExperimentConfig parse_experiment_config(const IniFile& ini) {
  ExperimentConfig cfg;
  SchemeSpec shared;  // scheme parameters shared by the [schemes] section
  std::vector<std::string> scheme_list;
  bool have_snr = false, have_n = false, have_schemes = false;

  for (const auto& [name, section] : ini.sections) {
    if (name == "problem") {
      for (const auto& [key, val] : section.entries) {
        try {
          if (key == "kind") {
            const std::string k = lower(val.text);
            if (k != "hard-abs" && k != "quadratic")
              throw ConfigError("unknown problem kind '" + val.text + "'");
            cfg.problem.kind = k;
          } else if (key == "d") {
            cfg.problem.d = static_cast<std::size_t>(parse_count_token(val.text));
          } else if (key == "diameter") {
            cfg.problem.diameter = parse_double(val.text);
          } else if (key == "bound") {
            cfg.problem.bound = parse_double(val.text);
          } else if (key == "delta") {
            cfg.problem.delta = parse_double(val.text);
          } else if (key == "oracle") {
            cfg.problem.oracle = parse_oracle(val.text);
          } else if (key == "quad_rows") {
            cfg.problem.quad_rows = static_cast<std::size_t>(parse_count_token(val.text));
          } else {
            throw ConfigError("unknown key '" + key + "' in [problem]");
          }
        } catch (const ConfigError& e) {
          fail_at(ini, val.line, e.what());
        }
      }
    } else if (name == "schemes") {
      for (const auto& [key, val] : section.entries) {
        try {
          if (key == "list") {
            scheme_list = split_list(val.text);
            have_schemes = true;
          } else if (key == "sampled_uses") {
            shared.sampled_uses = static_cast<std::size_t>(parse_count_token(val.text));
          } else if (key == "digital_rate") {
            if (lower(trim(val.text)) == "auto") {
              shared.rate_bits = 0;
            } else {
              const std::uint64_t r = parse_u64(val.text);
              if (r < 1 || r > 52) throw ConfigError("digital_rate must be auto or in [1, 52]");
              shared.rate_bits = static_cast<int>(r);
            }
          } else if (key == "digital_ks") {
            shared.ks = static_cast<int>(parse_u64(val.text));
          } else if (key == "digital_split") {
            shared.split = parse_bool(val.text);
          } else if (key == "digital_hs") {
            shared.hs_override = static_cast<int>(parse_u64(val.text));
          } else {
            throw ConfigError("unknown key '" + key + "' in [schemes]");
          }
        } catch (const ConfigError& e) {
          fail_at(ini, val.line, e.what());
        }
      }
    } else if (name == "sweep") {
      for (const auto& [key, val] : section.entries) {
        try {
          if (key == "snr") {
            cfg.snr_grid.clear();
            for (const std::string& tok : split_list(val.text))
              cfg.snr_grid.push_back(parse_snr_token(tok));
            have_snr = true;
          } else if (key == "n") {
            cfg.n_grid.clear();
            for (const std::string& tok : split_list(val.text))
              cfg.n_grid.push_back(parse_count_token(tok));
            have_n = true;
          } else if (key == "reps") {
            cfg.reps = static_cast<int>(parse_u64(val.text));
          } else if (key == "power") {
            cfg.power = parse_double(val.text);
          } else if (key == "seed") {
            cfg.master_seed = parse_u64(val.text);
          } else {
            throw ConfigError("unknown key '" + key + "' in [sweep]");
          }
        } catch (const ConfigError& e) {
          fail_at(ini, val.line, e.what());
        }
      }
    } else if (name == "output") {
      for (const auto& [key, val] : section.entries) {
        try {
          if (key == "path") {
            cfg.out_path = val.text;
          } else if (key == "overlay") {
            cfg.overlay = parse_bool(val.text);
          } else if (key == "measure_trials") {
            cfg.measure_trials = static_cast<int>(parse_u64(val.text));
          } else {
            throw ConfigError("unknown key '" + key + "' in [output]");
          }
        } catch (const ConfigError& e) {
          fail_at(ini, val.line, e.what());
        }
      }
    } else {
      fail_at(ini, section.line, "unknown section [" + name + "]");
    }
  }

  if (!have_schemes || scheme_list.empty())
    throw ConfigError(ini.path + ": [schemes] list is required");
  if (!have_snr || cfg.snr_grid.empty())
    throw ConfigError(ini.path + ": [sweep] snr grid is required");
  if (!have_n || cfg.n_grid.empty()) throw ConfigError(ini.path + ": [sweep] n grid is required");

  for (const std::string& label : scheme_list) {
    SchemeSpec spec = shared;
    spec.kind = parse_scheme_kind(label);
    spec.label = label;
    for (const SchemeSpec& prev : cfg.schemes) {
      if (prev.label == label) throw ConfigError(ini.path + ": duplicate scheme '" + label + "'");
    }
    cfg.schemes.push_back(std::move(spec));
  }

  // Cross-field validation.
  if (cfg.problem.d == 0) throw ConfigError(ini.path + ": d must be positive");
  if (!(cfg.problem.diameter > 0.0)) throw ConfigError(ini.path + ": diameter must be positive");
  if (cfg.problem.kind == "hard-abs") {
    if (!(cfg.problem.bound > 0.0)) throw ConfigError(ini.path + ": bound must be positive");
    if (!(cfg.problem.delta > 0.0 && cfg.problem.delta <= 0.5))
      throw ConfigError(ini.path + ": delta must lie in (0, 0.5]");
  } else {
    if (!(cfg.problem.bound >= 0.0)) throw ConfigError(ini.path + ": bound must be nonnegative");
  }
  if (cfg.reps < 1) throw ConfigError(ini.path + ": reps must be positive");
  if (!(cfg.power > 0.0)) throw ConfigError(ini.path + ": power must be positive");
  if (cfg.measure_trials < 10000)
    throw ConfigError(ini.path + ": measure_trials must be at least 10000");
  if (cfg.out_path.empty()) throw ConfigError(ini.path + ": output path must be nonempty");
  for (const SchemeSpec& s : cfg.schemes) {
    if (s.kind == SchemeKind::SampledAnalog) {
      if (s.sampled_uses == 0)
        throw ConfigError(ini.path + ": sampled_uses is required for sampled-analog");
      if (s.sampled_uses > next_pow2(cfg.problem.d))
        throw ConfigError(ini.path + ": sampled_uses exceeds the padded dimension");
    }
    if (s.kind == SchemeKind::DigitalAsk && s.rate_bits == 0) {
      for (std::uint64_t n : cfg.n_grid) {
        if (n < 2)
          throw ConfigError(ini.path + ": auto digital rate needs every N >= 2");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(parse_ini_file(path));
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& label, double snr,
                        std::uint64_t n) {
  std::uint64_t s = derive_seed(master, fnv1a64(label));
  s = derive_seed(s, std::bit_cast<std::uint64_t>(snr));
  return derive_seed(s, n);
}

ConvexProblem build_problem(const ProblemSpec& spec, std::uint64_t master_seed) {
  if (spec.kind == "hard-abs") {
    return ConvexProblem::hard_abs(spec.d, spec.diameter, spec.bound, spec.delta, spec.oracle);
  }
  if (spec.kind != "quadratic") throw ConfigError("unknown problem kind '" + spec.kind + "'");
  const std::size_t rows = spec.quad_rows == 0 ? spec.d : spec.quad_rows;
  Rng gen(derive_seed(master_seed, fnv1a64("quadratic-instance")));
  std::vector<double> a(rows * spec.d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (double& v : a) v = scale * gen.gaussian();
  std::vector<double> b(rows);
  for (double& v : b) v = gen.gaussian();
  return ConvexProblem::quadratic(rows, spec.d, std::move(a), std::move(b), spec.diameter,
                                  spec.bound, DomainKind::L2Ball);
}

ChannelSpec build_channel(const SchemeSpec& scheme, const ConvexProblem& problem, double power,
                          double snr) {
  if (scheme.kind == SchemeKind::NoiselessBaseline) {
    const double b = problem.gradient_bound();
    return ChannelSpec::from_sigma(b * b / static_cast<double>(problem.dim()), 0.0);
  }
  return ChannelSpec::from_snr(power, snr);
}

std::unique_ptr<GradientCode> build_code(const SchemeSpec& scheme, const ConvexProblem& problem,
                                         double power, double snr, std::uint64_t n,
                                         std::uint64_t run_seed) {
  const double b = problem.gradient_bound();
  const std::size_t d = problem.dim();
  switch (scheme.kind) {
    case SchemeKind::ScaledAnalog:
      return std::make_unique<ScaledAnalogCode>(d, b, power);
    case SchemeKind::SampledAnalog:
      return std::make_unique<SampledAnalogCode>(d, scheme.sampled_uses, b, power,
                                                 derive_seed(run_seed, 3));
    case SchemeKind::DigitalAsk: {
      const int rate = scheme.rate_bits > 0 ? scheme.rate_bits
                                            : bits_for_snr(snr, static_cast<double>(n));
      return std::make_unique<GainShapeCode>(d, b, power, rate, derive_seed(run_seed, 3),
                                             derive_seed(run_seed, 4), scheme.ks, scheme.split,
                                             scheme.hs_override);
    }
    case SchemeKind::NoiselessBaseline:
      return std::make_unique<ScaledAnalogCode>(d, b, b * b / static_cast<double>(d));
  }
  throw std::logic_error("build_code: unhandled scheme kind");
}

CodeQuality measure_code_quality(GradientCode& code, const ConvexProblem& problem,
                                 const ChannelSpec& channel, int trials, bool force_correct_demod,
                                 std::uint64_t seed) {
  if (trials < 10000)
    throw std::invalid_argument("measure_code_quality: at least 10000 trials required");
  if (code.dim() != problem.dim())
    throw std::invalid_argument("measure_code_quality: dimension mismatch");
  Rng oracle_rng(derive_seed(seed, 1));
  Rng noise_rng(derive_seed(seed, 2));
  const std::vector<double>& center = problem.domain().center;
  const double sigma = std::sqrt(channel.sigma2);

  std::vector<double> mean_est(problem.dim(), 0.0);
  double second = 0.0;
  PowerLedger ledger;
  for (int t = 1; t <= trials; ++t) {
    const std::vector<double> grad = problem.oracle(center, oracle_rng);
    const std::vector<double> sent = code.encode(grad, static_cast<std::uint64_t>(t));
    std::vector<double> received(sent.size());
    double energy = 0.0;
    for (std::size_t i = 0; i < sent.size(); ++i) {
      energy += sent[i] * sent[i];
      double z = noise_rng.gaussian(sigma);
      if (force_correct_demod) {
        const double margin = code.demod_margin(i);
        while (!(std::fabs(z) < margin)) z = noise_rng.gaussian(sigma);
      }
      received[i] = sent[i] + z;
    }
    ledger.record(energy, sent.size());
    const std::vector<double> est = code.decode(received, static_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < est.size(); ++i) mean_est[i] += est[i];
    second += squared_norm(est);
  }
  const double inv = 1.0 / static_cast<double>(trials);
  const std::vector<double> target = problem.mean_gradient(center);
  double bias_sq = 0.0;
  for (std::size_t i = 0; i < mean_est.size(); ++i) {
    const double diff = mean_est[i] * inv - target[i];
    bias_sq += diff * diff;
  }
  return CodeQuality{std::sqrt(bias_sq), second * inv, ledger.average()};
}

namespace {

CellStats run_cell(const ExperimentConfig& cfg, const ConvexProblem& problem,
                   const SchemeSpec& scheme, double snr, std::uint64_t n) {
  CellStats st{};
  st.scheme = scheme.label;
  st.snr = snr;
  st.d = problem.dim();
  st.n = n;
  st.reps = cfg.reps;
  st.seed_group = cell_seed(cfg.master_seed, scheme.label, snr, n);
  st.skipped = false;
  st.power_ok = true;

  const ChannelSpec channel = build_channel(scheme, problem, cfg.power, snr);
  const std::unique_ptr<GradientCode> probe =
      build_code(scheme, problem, cfg.power, snr, n, st.seed_group);
  const std::uint64_t uses = probe->channel_uses();
  if (n / uses == 0) {
    st.skipped = true;
    st.skip_reason = "budget N=" + std::to_string(n) + " is below one query (" +
                     std::to_string(uses) + " uses)";
    return st;
  }

  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(cfg.reps));
  PowerLedger total;
  std::uint64_t errors = 0, iterations = 0;
  for (int rep = 0; rep < cfg.reps; ++rep) {
    const std::uint64_t rep_seed = derive_seed(st.seed_group, static_cast<std::uint64_t>(rep));
    const std::unique_ptr<GradientCode> code =
        build_code(scheme, problem, cfg.power, snr, n, rep_seed);
    RunConfig rc;
    rc.problem = &problem;
    rc.code = code.get();
    rc.channel = channel;
    rc.total_uses = n;
    rc.seed = rep_seed;
    const RunRecord rec = psgd_run(rc);
    gaps.push_back(rec.gap);
    total.merge(rec.ledger);
    errors += rec.demod_error_count;
    iterations += rec.iterations;
  }

  st.gap_median = median(gaps);
  st.gap_mean = mean(gaps);
  st.gap_iqr = interquartile_range(gaps);
  st.decode_err_rate = static_cast<double>(errors) / static_cast<double>(iterations);

  const std::uint64_t measure_seed = derive_seed(st.seed_group, 0x6d656173ull);
  const std::unique_ptr<GradientCode> mcode =
      build_code(scheme, problem, cfg.power, snr, n, measure_seed);
  const CodeQuality quality =
      measure_code_quality(*mcode, problem, channel, cfg.measure_trials, false, measure_seed);
  st.bias_norm = quality.bias_norm;
  st.alpha_hat_sq = quality.alpha_hat_sq;

  const PowerAudit audit = audit_power(total, channel, 0.02);
  st.avg_power = audit.average_power;
  st.power_ok = audit.ok;

  if (cfg.overlay) {
    st.bound_overlay = lemma1_bound(probe->declared_alpha(channel.snr()), 0.0,
                                    problem.domain().diameter(), static_cast<double>(n),
                                    static_cast<double>(uses));
  }
  return st;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, int threads) {
  if (cfg.schemes.empty() || cfg.snr_grid.empty() || cfg.n_grid.empty())
    throw ConfigError("run_sweep: empty grid");
  const ConvexProblem problem = build_problem(cfg.problem, cfg.master_seed);

  struct CellCoord {
    const SchemeSpec* scheme;
    double snr;
    std::uint64_t n;
  };
  std::vector<CellCoord> coords;
  for (const SchemeSpec& scheme : cfg.schemes) {
    for (double snr : cfg.snr_grid) {
      for (std::uint64_t n : cfg.n_grid) coords.push_back(CellCoord{&scheme, snr, n});
    }
  }

  SweepResult result;
  result.cells.resize(coords.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < coords.size(); i = next.fetch_add(1)) {
      result.cells[i] = run_cell(cfg, problem, *coords[i].scheme, coords[i].snr, coords[i].n);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t n_threads = threads <= 0 ? hw : static_cast<std::size_t>(threads);
  n_threads = std::min(n_threads, coords.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (const CellStats& cell : result.cells) {
    if (cell.skipped) {
      std::cerr << "skipping " << cell.scheme << " snr=" << cell.snr << " N=" << cell.n << ": "
                << cell.skip_reason << "\n";
    } else if (!cell.power_ok) {
      result.power_violation = true;
      std::cerr << "power violation in " << cell.scheme << " snr=" << cell.snr
                << " N=" << cell.n << ": average " << cell.avg_power << "\n";
    }
  }
  return result;
}

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

}  // namespace

std::string render_csv(const SweepResult& result) {
  std::string out =
      "scheme,snr_linear,d,N,seed_group,reps,gap_median,gap_mean,gap_iqr,bias_norm,"
      "alpha_hat_sq,avg_power,decode_err_rate,bound_overlay\n";
  for (const CellStats& c : result.cells) {
    if (c.skipped) continue;
    out += c.scheme;
    out += ',';
    out += fmt_g(c.snr);
    out += ',';
    out += std::to_string(c.d);
    out += ',';
    out += std::to_string(c.n);
    out += ',';
    out += std::to_string(c.seed_group);
    out += ',';
    out += std::to_string(c.reps);
    out += ',';
    out += fmt_g(c.gap_median);
    out += ',';
    out += fmt_g(c.gap_mean);
    out += ',';
    out += fmt_g(c.gap_iqr);
    out += ',';
    out += fmt_g(c.bias_norm);
    out += ',';
    out += fmt_g(c.alpha_hat_sq);
    out += ',';
    out += fmt_g(c.avg_power);
    out += ',';
    out += fmt_g(c.decode_err_rate);
    out += ',';
    if (c.bound_overlay.has_value()) out += fmt_g(*c.bound_overlay);
    out += '\n';
  }
  return out;
}

void write_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  const std::string text = render_csv(result);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace ota
