#include <cmath>
#include <vector>

#include "doctest.h"
#include "ota/numeric.hpp"
#include "ota/problems.hpp"

using namespace ota;

TEST_CASE("box domain geometry") {
  const Domain box = Domain::linf_box(std::vector<double>(4, 0.0), 2.0);
  CHECK(box.radius == doctest::Approx(0.5));  // D / (2 sqrt(d))
  CHECK(box.diameter() == doctest::Approx(2.0));
  CHECK(box.contains(std::vector<double>{0.5, -0.5, 0.0, 0.25}));
  CHECK_FALSE(box.contains(std::vector<double>{0.6, 0.0, 0.0, 0.0}));

  const std::vector<double> p = project(std::vector<double>{0.9, -2.0, 0.1, 0.0}, box);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(-0.5));
  CHECK(p[2] == doctest::Approx(0.1));
  CHECK(p[3] == doctest::Approx(0.0));
}

TEST_CASE("ball domain geometry") {
  const Domain ball = Domain::l2_ball(std::vector<double>(3, 0.0), 2.0);
  CHECK(ball.radius == doctest::Approx(1.0));
  CHECK(ball.diameter() == doctest::Approx(2.0));
  const std::vector<double> inside{0.3, 0.4, 0.0};
  CHECK(project(inside, ball) == inside);
  const std::vector<double> p = project(std::vector<double>{3.0, 0.0, 4.0}, ball);
  CHECK(norm(p) == doctest::Approx(1.0));
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK(p[2] == doctest::Approx(0.8));
}

TEST_CASE("hard instance objective and subgradient") {
  const ConvexProblem prob =
      ConvexProblem::hard_abs(4, 2.0, 1.0, 0.25, OracleKind::BernoulliHard);
  CHECK(prob.dim() == 4);
  CHECK(prob.gradient_bound() == doctest::Approx(1.0));
  CHECK(prob.optimum() == doctest::Approx(0.0));
  CHECK(prob.delta() == doctest::Approx(0.25));

  // Minimizer is the +corner: v * D / (2 sqrt(d)) = 0.5 per coordinate.
  const std::vector<double> corner(4, 0.5);
  CHECK(prob.objective(corner) == doctest::Approx(0.0));
  const std::vector<double> center(4, 0.0);
  // (2 B delta / sqrt(d)) * sum |0 - 0.5| = 0.25 * 2
  CHECK(prob.objective(center) == doctest::Approx(0.5));

  const std::vector<double> g = prob.subgradient(center);
  for (double gi : g) CHECK(gi == doctest::Approx(-0.25));
  CHECK_THROWS(prob.objective(std::vector<double>(4, 10.0)));
  Rng rng(1);
  CHECK_THROWS(prob.oracle(std::vector<double>(4, 10.0), rng));
}

TEST_CASE("hard instance validation") {
  CHECK_THROWS(ConvexProblem::hard_abs(0, 2.0, 1.0, 0.2, OracleKind::BernoulliHard));
  CHECK_THROWS(ConvexProblem::hard_abs(4, 2.0, 1.0, 0.6, OracleKind::BernoulliHard));
  CHECK_THROWS(ConvexProblem::hard_abs(4, 2.0, 1.0, 0.0, OracleKind::BernoulliHard));
  CHECK_THROWS(
      ConvexProblem::hard_abs(4, 2.0, 1.0, 0.2, OracleKind::BernoulliHard, {1.0, -1.0}));
  CHECK_THROWS(
      ConvexProblem::hard_abs(2, 2.0, 1.0, 0.2, OracleKind::BernoulliHard, {0.5, 1.0}));
}

TEST_CASE("bernoulli oracle is unbiased with exact second moment") {
  const std::size_t d = 4;
  const double delta = 0.15;
  const ConvexProblem prob = ConvexProblem::hard_abs(d, 2.0, 1.0, delta, OracleKind::BernoulliHard);
  Rng rng(404);
  const std::vector<double> x(d, 0.0);
  const int n = 200000;
  std::vector<double> sum(d, 0.0);
  for (int t = 0; t < n; ++t) {
    const std::vector<double> g = prob.oracle(x, rng);
    CHECK(squared_norm(g) == doctest::Approx(1.0).epsilon(1e-12));  // exactly B^2
    for (std::size_t i = 0; i < d; ++i) sum[i] += g[i];
  }
  const std::vector<double> target = prob.mean_gradient(x);
  // Per-coordinate sd is B/sqrt(d) = 0.5; five standard errors at n draws.
  const double tol = 5.0 * 0.5 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < d; ++i) {
    CHECK(target[i] == doctest::Approx(-2.0 * delta / 2.0));  // -2 B delta / sqrt(d)
    CHECK(std::fabs(sum[i] / n - target[i]) < tol);
  }
}

TEST_CASE("gaussian oracle reports its true bound") {
  const std::size_t d = 8;
  const double delta = 0.25;
  const ConvexProblem prob = ConvexProblem::hard_abs(d, 2.0, 1.0, delta, OracleKind::GaussianHard);
  CHECK(prob.gradient_bound() == doctest::Approx(std::sqrt(1.0 + 4.0 * delta * delta)));
  Rng rng(505);
  const std::vector<double> x(d, 0.0);
  const int n = 100000;
  std::vector<double> sum(d, 0.0);
  double second = 0.0;
  for (int t = 0; t < n; ++t) {
    const std::vector<double> g = prob.oracle(x, rng);
    for (std::size_t i = 0; i < d; ++i) sum[i] += g[i];
    second += squared_norm(g);
  }
  const double b2 = prob.gradient_bound() * prob.gradient_bound();
  CHECK(second / n == doctest::Approx(b2).epsilon(0.02));
  const double drift = -2.0 * delta / std::sqrt(static_cast<double>(d));
  const double tol = 5.0 * (1.0 / std::sqrt(static_cast<double>(d))) / std::sqrt(double(n));
  for (std::size_t i = 0; i < d; ++i) CHECK(std::fabs(sum[i] / n - drift) < tol);
}

TEST_CASE("exact-plus-gaussian oracle meets the bound") {
  const std::size_t d = 8;
  const ConvexProblem prob =
      ConvexProblem::hard_abs(d, 2.0, 1.0, 0.2, OracleKind::ExactPlusGaussian);
  CHECK(prob.gradient_bound() == doctest::Approx(1.0));
  Rng rng(606);
  const std::vector<double> x(d, 0.1);  // away from the kink
  const std::vector<double> sg = prob.subgradient(x);
  const int n = 100000;
  std::vector<double> sum(d, 0.0);
  double second = 0.0;
  for (int t = 0; t < n; ++t) {
    const std::vector<double> g = prob.oracle(x, rng);
    for (std::size_t i = 0; i < d; ++i) sum[i] += g[i];
    second += squared_norm(g);
  }
  CHECK(second / n <= 1.0 * 1.02);
  CHECK(second / n >= 0.9);  // tau was sized to make the bound tight
  const double tau = std::sqrt((1.0 - 0.16) / static_cast<double>(d));
  const double tol = 5.0 * tau / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < d; ++i) CHECK(std::fabs(sum[i] / n - sg[i]) < tol);
  CHECK(prob.mean_gradient(x) == sg);
}

TEST_CASE("quadratic problem with interior optimum") {
  // A = I, b = (0.25, -0.25): unconstrained minimum b lies inside the unit ball.
  const std::vector<double> a{1.0, 0.0, 0.0, 1.0};
  const std::vector<double> b{0.25, -0.25};
  const ConvexProblem prob = ConvexProblem::quadratic(2, 2, a, b, 2.0, 0.0, DomainKind::L2Ball);
  CHECK(prob.optimum() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prob.objective(std::vector<double>{0.0, 0.0}) == doctest::Approx(0.0625));
  const std::vector<double> g = prob.subgradient(std::vector<double>{0.0, 0.0});
  CHECK(g[0] == doctest::Approx(-0.25));
  CHECK(g[1] == doctest::Approx(0.25));
  // Tight bound: exact oracle, no noise.
  Rng rng(3);
  CHECK(prob.oracle(std::vector<double>{0.1, 0.2}, rng) ==
        prob.subgradient(std::vector<double>{0.1, 0.2}));
  CHECK_THROWS(prob.delta());
  CHECK_THROWS(prob.direction());
}

TEST_CASE("quadratic bound validation and noise sizing") {
  const std::vector<double> a{1.0, 0.0, 0.0, 1.0};
  const std::vector<double> b{0.0, 0.0};
  CHECK_THROWS(ConvexProblem::quadratic(2, 2, a, b, 2.0, 0.1, DomainKind::L2Ball));
  const ConvexProblem prob = ConvexProblem::quadratic(2, 2, a, b, 2.0, 5.0, DomainKind::L2Ball);
  CHECK(prob.gradient_bound() == doctest::Approx(5.0));
  Rng rng(8);
  const std::vector<double> x{0.5, -0.5};
  const int n = 50000;
  double second = 0.0;
  for (int t = 0; t < n; ++t) second += squared_norm(prob.oracle(x, rng));
  CHECK(second / n <= 25.0 * 1.02);
}
