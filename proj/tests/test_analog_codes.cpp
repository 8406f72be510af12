#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "ota/analog_codes.hpp"
#include "ota/channel.hpp"
#include "ota/numeric.hpp"

using namespace ota;

TEST_CASE("scaled analog golden values") {
  ScaledAnalogCode code(2, 2.0, 8.0);  // scale = sqrt(P d)/B = 2
  CHECK(code.dim() == 2);
  CHECK(code.channel_uses() == 2);
  const std::vector<double> sent = code.encode(std::vector<double>{1.0, 1.0}, 1);
  CHECK(sent[0] == doctest::Approx(2.0));
  CHECK(sent[1] == doctest::Approx(2.0));
  const std::vector<double> back = code.decode(sent, 1);
  CHECK(back[0] == doctest::Approx(1.0));
  CHECK(back[1] == doctest::Approx(1.0));
  CHECK(code.declared_alpha(1.0) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(code.declared_alpha(std::numeric_limits<double>::infinity()) == doctest::Approx(2.0));
  CHECK(code.declared_beta() == 0.0);
  CHECK_THROWS(code.declared_alpha(0.0));
  CHECK_THROWS(code.encode(std::vector<double>{1.0}, 1));
  CHECK_THROWS(ScaledAnalogCode(0, 1.0, 1.0));
  CHECK_THROWS(ScaledAnalogCode(2, 0.0, 1.0));
  CHECK_THROWS(ScaledAnalogCode(2, 1.0, 0.0));
}

TEST_CASE("scaled analog saturates the power budget at a full-norm gradient") {
  const double bound = 1.5, power = 2.0;
  ScaledAnalogCode code(8, bound, power);
  std::vector<double> g(8, bound / std::sqrt(8.0));  // ||g|| = B
  const std::vector<double> sent = code.encode(g, 1);
  CHECK(squared_norm(sent) / 8.0 == doctest::Approx(power));
  for (double s : sent) CHECK(std::fabs(s) <= std::sqrt(power * 8.0) + 1e-12);
}

TEST_CASE("scaled analog has no demodulation events") {
  ScaledAnalogCode code(3, 1.0, 1.0);
  CHECK(std::isinf(code.demod_margin(0)));
  const std::vector<double> a{0.1, 0.2, 0.3};
  const std::vector<double> b{9.0, -9.0, 0.0};
  CHECK_FALSE(code.demod_error(a, b));
}

TEST_CASE("sampled analog with full sampling inverts exactly") {
  SampledAnalogCode code(4, 4, 1.0, 1.0, 12345);
  const std::vector<double> g{0.3, -0.2, 0.05, 0.4};
  const std::vector<double> sent = code.encode(g, 7);
  CHECK(sent.size() == 4);
  const std::vector<double> back = code.decode(sent, 7);
  for (std::size_t i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(g[i]).epsilon(1e-12));
}

TEST_CASE("sampled analog parameters") {
  CHECK_THROWS(SampledAnalogCode(4, 0, 1.0, 1.0, 1));
  CHECK_THROWS(SampledAnalogCode(4, 5, 1.0, 1.0, 1));
  SampledAnalogCode pads(5, 8, 1.0, 1.0, 1);  // padded dim is 8
  CHECK(pads.channel_uses() == 8);
  SampledAnalogCode code(4, 2, 1.0, 1.0, 1);
  CHECK(code.declared_alpha(1.0) == doctest::Approx(2.0));  // sqrt((4/2) * 2)
  CHECK(code.declared_alpha(std::numeric_limits<double>::infinity()) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sampled analog decoder is unbiased over the shared draws") {
  const std::size_t d = 4, uses = 2;
  SampledAnalogCode code(d, uses, 1.0, 1.0, 999);
  const std::vector<double> g{0.5, -0.25, 0.125, 0.3};
  const int n = 50000;
  std::vector<double> sum(d, 0.0);
  for (int t = 1; t <= n; ++t) {
    const std::vector<double> back = code.decode(code.encode(g, t), t);
    for (std::size_t i = 0; i < d; ++i) sum[i] += back[i];
  }
  for (std::size_t i = 0; i < d; ++i) CHECK(std::fabs(sum[i] / n - g[i]) < 0.04);
}

TEST_CASE("sampled analog meets its declared second moment under noise") {
  const std::size_t d = 4, uses = 2;
  const double bound = 1.0, power = 1.0, snr = 1.0;
  SampledAnalogCode code(d, uses, bound, power, 321);
  const ChannelSpec channel = ChannelSpec::from_snr(power, snr);
  Rng noise(42);
  PowerLedger ledger;
  std::vector<double> g{0.5, 0.5, 0.5, 0.5};  // ||g|| = B
  const int n = 50000;
  double second = 0.0;
  for (int t = 1; t <= n; ++t) {
    const std::vector<double> y = transmit(channel, code.encode(g, t), noise, ledger);
    second += squared_norm(code.decode(y, t));
  }
  const double alpha2 = std::pow(code.declared_alpha(snr), 2.0);
  CHECK(second / n <= alpha2 * 1.03);
  CHECK(second / n >= alpha2 * 0.9);  // the bound is tight at a full-norm gradient
  // Power budget met with equality in expectation at ||g|| = B.
  CHECK(ledger.average() == doctest::Approx(power).epsilon(0.02));
}

TEST_CASE("sampled analog encodes within the power budget") {
  SampledAnalogCode code(6, 3, 2.0, 4.0, 5);
  Rng gen(11);
  for (int t = 1; t <= 200; ++t) {
    std::vector<double> g(6);
    for (double& v : g) v = gen.gaussian();
    const double nn = norm(g);
    for (double& v : g) v *= 2.0 / nn;  // ||g|| = B exactly
    const std::vector<double> sent = code.encode(g, static_cast<std::uint64_t>(t));
    CHECK(sent.size() == 3);
    // Per-block energy can exceed 3P for unlucky subsamples, but the expected
    // energy per use is P; just check nothing exploded beyond the padded mass.
    CHECK(squared_norm(sent) <= 4.0 * 8.0 + 1e-9);
  }
}
