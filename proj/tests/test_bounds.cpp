#include <cmath>
#include <vector>

#include "doctest.h"
#include "ota/bounds.hpp"

using namespace ota;

namespace {

RateQuery q(double n, double d, double snr) {
  RateQuery out;
  out.n = n;
  out.d = d;
  out.snr = snr;
  return out;
}

}  // namespace

TEST_CASE("classic rate") {
  RateQuery query = q(1e4, 16, 3.0);
  query.diameter = 2.0;
  query.bound = 0.5;
  const RateResult r = classic_rate(query);
  CHECK(r.valid);
  CHECK(r.value == doctest::Approx(2.0 * 0.5 / 100.0).epsilon(1e-12));

  query.constant = 3.0;
  CHECK(classic_rate(query).value == doctest::Approx(0.03).epsilon(1e-12));

  CHECK_THROWS(classic_rate(q(0.0, 16, 3.0)));
  CHECK_THROWS(classic_rate(q(100, 0, 3.0)));
}

TEST_CASE("general channel lower bound") {
  // d=16, snr=3: capacity term log2(4)/2 = 1 per use, slowdown sqrt(16/1) = 4.
  const RateResult r = general_lower(q(1e4, 16, 3.0));
  CHECK(r.valid);
  CHECK(r.value == doctest::Approx(0.04).epsilon(1e-12));

  // High snr saturates the min at d: no slowdown.
  const RateResult sat = general_lower(q(1e4, 4, 1e9));
  CHECK(sat.valid);
  CHECK(sat.value == doctest::Approx(classic_rate(q(1e4, 4, 1e9)).value).epsilon(1e-12));

  // Budget too small to push d dimensions through the channel.
  const RateResult bad = general_lower(q(10, 16, 1.0));
  CHECK_FALSE(bad.valid);
  CHECK(!bad.note.empty());
  CHECK(std::isnan(bad.value));
}

TEST_CASE("analog factor") {
  const RateResult up = analog_upper(q(1e4, 16, 1.0));
  CHECK(up.valid);
  CHECK(up.value == doctest::Approx(5.656854249492381 / 100.0).epsilon(1e-12));

  // Identical factor on the converse side, but only with enough uses.
  const RateResult low_ok = analog_lower(q(64, 16, 1.0));  // needs >= 32
  CHECK(low_ok.valid);
  CHECK(low_ok.value == doctest::Approx(analog_upper(q(64, 16, 1.0)).value).epsilon(1e-12));
  const RateResult low_bad = analog_lower(q(31, 16, 1.0));
  CHECK_FALSE(low_bad.valid);

  // Infinite snr collapses the factor to sqrt(d).
  const RateResult clean = analog_upper(q(1e4, 16, 1e18));
  CHECK(clean.value == doctest::Approx(4.0 / 100.0).epsilon(1e-6));
}

TEST_CASE("digital upper bounds at the golden point") {
  // d=1024, snr=1e8, n=1e6: r_real = log2(sqrt(4e8/ln 1e6) + 1).
  const RateQuery query = q(1e6, 1024, 1e8);
  CHECK(real_rate_for_snr(1e8, 1e6) == doctest::Approx(12.393871987188097).epsilon(1e-12));
  const RateResult ideal = ask_upper_ideal(query);
  CHECK(ideal.valid);
  CHECK(ideal.value == doctest::Approx(0.018179271299716707).epsilon(1e-12));
  const RateResult real = ask_upper(query);
  CHECK(real.valid);
  CHECK(real.value == doctest::Approx(0.12594968614275215).epsilon(1e-12));
  CHECK(real.value >= ideal.value);

  CHECK_THROWS(real_rate_for_snr(0.0, 100.0));
  CHECK_THROWS(real_rate_for_snr(1.0, 1.0));
}

TEST_CASE("digital upper bound regime checks") {
  // Low snr drives the real rate below 6 bits.
  const RateResult low = ask_upper(q(1e4, 64, 0.5));
  CHECK_FALSE(low.valid);
  CHECK(!low.note.empty());
  // The idealized version has no such floor.
  CHECK(ask_upper_ideal(q(1e4, 64, 0.5)).valid);
  // The iterated-log precondition holds for every dimension a double can
  // express, so a huge d stays valid given enough snr.
  CHECK(ask_upper(q(1e6, 1e18, 1e12)).valid);
}

TEST_CASE("coordinate-sampling lower bound") {
  RateQuery one = q(1e4, 16, 7.0);
  one.k = 1.0;
  const RateResult r1 = kcs_lower(one);
  CHECK(r1.valid);
  CHECK(r1.value == doctest::Approx(0.02).epsilon(1e-12));  // factor sqrt(16/4) = 2

  // k = d uses the envelope k log2(d/k) + k (1 + log2 e) >= d: factor 1.
  RateQuery full = q(1e4, 16, 7.0);
  full.k = 16.0;
  const RateResult rd = kcs_lower(full);
  CHECK(rd.valid);
  CHECK(rd.value == doctest::Approx(0.01).epsilon(1e-12));

  // The bound does not depend on snr.
  RateQuery other = one;
  other.snr = 1e-3;
  CHECK(kcs_lower(other).value == doctest::Approx(r1.value).epsilon(1e-12));

  RateQuery bad = one;
  bad.k = 0.0;
  CHECK_THROWS(kcs_lower(bad));
  bad.k = 17.0;
  CHECK_THROWS(kcs_lower(bad));
}

TEST_CASE("crossover table locates the analog/digital switch") {
  const double d = 64.0, n = 16384.0;
  const std::vector<double> grid{0.1, 1e6};
  const std::vector<CrossoverRow> rows = crossover_table(d, n, grid);
  REQUIRE(rows.size() == 2);

  CHECK(rows[0].snr == doctest::Approx(0.1));
  CHECK(rows[0].analog_factor == doctest::Approx(std::sqrt(64.0 + 640.0)).epsilon(1e-12));
  CHECK(rows[0].winner == "analog");

  CHECK(rows[1].analog_factor == doctest::Approx(std::sqrt(64.0 + 64.0 / 1e6)).epsilon(1e-12));
  CHECK(rows[1].digital_ideal_factor < rows[1].analog_factor);
  CHECK(rows[1].digital_factor >= rows[1].digital_ideal_factor);
  CHECK(rows[1].winner == "digital");

  CHECK_THROWS(crossover_table(0.0, n, grid));
  CHECK_THROWS(crossover_table(d, 1.0, grid));
  CHECK_THROWS(crossover_table(d, n, std::vector<double>{0.0}));
}
