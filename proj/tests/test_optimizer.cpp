#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ota/analog_codes.hpp"
#include "ota/numeric.hpp"
#include "ota/optimizer.hpp"
#include "ota/problems.hpp"

using namespace ota;

namespace {

ConvexProblem hard16() {
  return ConvexProblem::hard_abs(16, 2.0, 1.0, 0.15, OracleKind::BernoulliHard);
}

}  // namespace

TEST_CASE("closed-form helpers") {
  CHECK(default_learning_rate(2.0, 3.0, 9) == doctest::Approx(0.5));
  CHECK_THROWS(default_learning_rate(0.0, 1.0, 4));
  CHECK_THROWS(default_learning_rate(1.0, -1.0, 4));
  CHECK_THROWS(default_learning_rate(1.0, 1.0, 0));

  // D (alpha / sqrt(N / uses) + beta) at D=3, alpha=2, N=400, uses=4.
  CHECK(lemma1_bound(2.0, 0.5, 3.0, 400.0, 4.0) == doctest::Approx(2.1));
  CHECK(lemma1_bound(1.0, 0.0, 1.0, 100.0, 1.0) == doctest::Approx(0.1));
  CHECK_THROWS(lemma1_bound(0.0, 0.0, 1.0, 100.0, 1.0));
  CHECK_THROWS(lemma1_bound(1.0, 0.0, 1.0, 0.0, 1.0));
}

TEST_CASE("zero learning rate freezes the iterate") {
  const ConvexProblem problem =
      ConvexProblem::hard_abs(4, 2.0, 1.0, 0.25, OracleKind::BernoulliHard);
  ScaledAnalogCode code(4, 1.0, 1.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_snr(1.0, 1.0);
  cfg.total_uses = 4096;
  cfg.learning_rate = 0.0;
  cfg.seed = 5;
  const RunRecord rec = psgd_run(cfg);
  // Average iterate is the start point (domain center); the gap there is the
  // objective value B * delta * D at the center of the hard instance.
  for (double v : rec.average_iterate) CHECK(v == doctest::Approx(0.0));
  CHECK(rec.gap == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rec.learning_rate == 0.0);
}

TEST_CASE("runs are deterministic in the seed") {
  const ConvexProblem problem = hard16();
  ScaledAnalogCode code(16, 1.0, 1.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_snr(1.0, 1.0);
  cfg.total_uses = 1 << 12;
  cfg.seed = 42;
  const RunRecord a = psgd_run(cfg);
  const RunRecord b = psgd_run(cfg);
  CHECK(a.gap == b.gap);
  CHECK(a.average_iterate == b.average_iterate);
  cfg.seed = 43;
  const RunRecord c = psgd_run(cfg);
  CHECK(a.average_iterate != c.average_iterate);
}

TEST_CASE("default learning rate uses the declared alpha") {
  const ConvexProblem problem = hard16();
  ScaledAnalogCode code(16, 1.0, 1.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_snr(1.0, 1.0);  // alpha = sqrt(2)
  cfg.total_uses = 1 << 12;                       // T = 256
  cfg.seed = 7;
  const RunRecord rec = psgd_run(cfg);
  CHECK(rec.iterations == 256);
  CHECK(rec.learning_rate == doctest::Approx(2.0 / (std::sqrt(2.0) * 16.0)).epsilon(1e-12));
}

TEST_CASE("iteration count floors the use budget") {
  const ConvexProblem problem =
      ConvexProblem::hard_abs(8, 2.0, 1.0, 0.15, OracleKind::BernoulliHard);
  ScaledAnalogCode code(8, 1.0, 1.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_snr(1.0, 1.0);
  cfg.total_uses = 83;  // 8 uses per query -> 10 full iterations
  cfg.seed = 1;
  const RunRecord rec = psgd_run(cfg);
  CHECK(rec.iterations == 10);
  CHECK(rec.ledger.total_uses == 80);

  cfg.total_uses = 7;  // below one query
  CHECK_THROWS(psgd_run(cfg));
}

TEST_CASE("average iterate stays feasible") {
  const ConvexProblem problem = hard16();
  ScaledAnalogCode code(16, 1.0, 1.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_snr(1.0, 0.05);  // heavy noise, big steps
  cfg.total_uses = 1 << 10;
  cfg.seed = 99;
  const RunRecord rec = psgd_run(cfg);
  CHECK(problem.domain().contains(rec.average_iterate));
}

TEST_CASE("trace records one entry per iteration") {
  const ConvexProblem problem = hard16();
  ScaledAnalogCode code(16, 1.0, 1.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_snr(1.0, 1.0);
  cfg.total_uses = 16 * 12;
  cfg.seed = 3;
  cfg.record_trace = true;
  const RunRecord rec = psgd_run(cfg);
  REQUIRE(rec.trace.size() == 12);
  for (const IterationTrace& t : rec.trace) {
    CHECK(t.query.size() == 16);
    CHECK(t.estimate.size() == 16);
    CHECK(t.power >= 0.0);
  }
}

TEST_CASE("configuration validation") {
  const ConvexProblem problem = hard16();
  ScaledAnalogCode code(16, 1.0, 1.0);
  RunConfig cfg;
  cfg.channel = ChannelSpec::from_snr(1.0, 1.0);
  cfg.total_uses = 1 << 10;
  CHECK_THROWS(psgd_run(cfg));  // no problem, no code
  cfg.problem = &problem;
  CHECK_THROWS(psgd_run(cfg));  // no code
  ScaledAnalogCode wrong(8, 1.0, 1.0);
  cfg.code = &wrong;
  CHECK_THROWS(psgd_run(cfg));  // dimension mismatch
  cfg.code = &code;
  cfg.learning_rate = -0.5;
  CHECK_THROWS(psgd_run(cfg));
}

TEST_CASE("exact-gradient descent on a quadratic reaches the classic rate") {
  // Identity A, interior optimum, noiseless identity channel: the run is
  // plain projected subgradient descent.
  const std::vector<double> a{1.0, 0.0, 0.0, 1.0};
  const std::vector<double> b{0.25, -0.25};
  const ConvexProblem problem =
      ConvexProblem::quadratic(2, 2, a, b, 2.0, 0.0, DomainKind::L2Ball);
  const double bound = problem.gradient_bound();
  ScaledAnalogCode code(2, bound, bound * bound / 2.0);
  RunConfig cfg;
  cfg.problem = &problem;
  cfg.code = &code;
  cfg.channel = ChannelSpec::from_sigma(bound * bound / 2.0, 0.0);
  cfg.total_uses = 512;  // T = 256
  cfg.seed = 11;
  const RunRecord rec = psgd_run(cfg);
  const double classic = 2.0 * bound / 16.0;
  CHECK(rec.gap >= 0.0);
  CHECK(rec.gap <= 1.5 * classic);
  CHECK(rec.gap < 0.05);  // interior optimum, exact gradients: much tighter
}

TEST_CASE("median gap stays under the predicted bound") {
  const ConvexProblem problem = hard16();
  const double snr = 1.0;
  ScaledAnalogCode code(16, 1.0, 1.0);
  std::vector<double> gaps;
  for (std::uint64_t seed = 100; seed < 109; ++seed) {
    RunConfig cfg;
    cfg.problem = &problem;
    cfg.code = &code;
    cfg.channel = ChannelSpec::from_snr(1.0, snr);
    cfg.total_uses = 1 << 12;
    cfg.seed = seed;
    gaps.push_back(psgd_run(cfg).gap);
  }
  const double predicted = lemma1_bound(code.declared_alpha(snr), 0.0, 2.0, 4096.0, 16.0);
  CHECK(median(gaps) <= predicted);
}
