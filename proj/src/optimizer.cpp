#include "ota/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "ota/numeric.hpp"

namespace ota {

double default_learning_rate(double alpha, double diameter, std::uint64_t iterations) {
  if (!(alpha > 0.0)) throw std::invalid_argument("default_learning_rate: alpha must be positive");
  if (!(diameter > 0.0))
    throw std::invalid_argument("default_learning_rate: diameter must be positive");
  if (iterations == 0)
    throw std::invalid_argument("default_learning_rate: iterations must be positive");
  return diameter / (alpha * std::sqrt(static_cast<double>(iterations)));
}

double lemma1_bound(double alpha, double beta, double diameter, double total_uses,
                    double uses_per_query) {
  if (!(alpha > 0.0) || !(beta >= 0.0) || !(diameter > 0.0) || !(total_uses > 0.0) ||
      !(uses_per_query > 0.0))
    throw std::invalid_argument("lemma1_bound: nonpositive input");
  return diameter * (alpha / std::sqrt(total_uses / uses_per_query) + beta);
}

RunRecord psgd_run(const RunConfig& cfg) {
  if (cfg.problem == nullptr || cfg.code == nullptr)
    throw std::invalid_argument("psgd_run: problem and code are required");
  if (cfg.problem->dim() != cfg.code->dim())
    throw std::invalid_argument("psgd_run: problem/code dimension mismatch");

  const std::uint64_t uses = cfg.code->channel_uses();
  const std::uint64_t iterations = cfg.total_uses / uses;
  if (iterations == 0) throw std::invalid_argument("psgd_run: budget admits no iteration");

  double eta;
  if (cfg.learning_rate.has_value()) {
    eta = *cfg.learning_rate;
    if (!(eta >= 0.0)) throw std::invalid_argument("psgd_run: negative learning rate");
  } else {
    eta = default_learning_rate(cfg.code->declared_alpha(cfg.channel.snr()),
                                cfg.problem->domain().diameter(), iterations);
  }

  Rng oracle_rng(derive_seed(cfg.seed, 1));
  Rng channel_rng(derive_seed(cfg.seed, 2));

  RunRecord rec;
  rec.iterations = iterations;
  rec.learning_rate = eta;
  rec.demod_error_count = 0;

  const Domain& dom = cfg.problem->domain();
  std::vector<double> x = dom.center;
  std::vector<double> sum(x.size(), 0.0);

  for (std::uint64_t t = 1; t <= iterations; ++t) {
    const std::vector<double> grad = cfg.problem->oracle(x, oracle_rng);
    const std::vector<double> sent = cfg.code->encode(grad, t);
    const std::vector<double> received = transmit(cfg.channel, sent, channel_rng, rec.ledger);
    const bool err = cfg.code->demod_error(sent, received);
    if (err) ++rec.demod_error_count;
    const std::vector<double> estimate = cfg.code->decode(received, t);
    if (estimate.size() != x.size()) throw std::runtime_error("psgd_run: decoded size mismatch");

    if (cfg.record_trace) {
      double energy = 0.0;
      for (double s : sent) energy += s * s;
      rec.trace.push_back(IterationTrace{x, estimate, energy / static_cast<double>(sent.size()), err});
    }

    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= eta * estimate[i];
    x = project(std::move(x), dom);
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
  }

  rec.average_iterate.resize(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i)
    rec.average_iterate[i] = sum[i] / static_cast<double>(iterations);
  rec.gap = cfg.problem->objective(rec.average_iterate) - cfg.problem->optimum();
  rec.decode_error_rate =
      static_cast<double>(rec.demod_error_count) / static_cast<double>(iterations);
  return rec;
}

}  // namespace ota
