#pragma once

#include <cstddef>
#include <vector>

#include "ota/rng.hpp"

namespace ota {

enum class DomainKind { L2Ball, LinfBox };

// Closed convex feasible set. radius means the ball radius for L2Ball and the
// per-coordinate half-width for LinfBox.
struct Domain {
  DomainKind kind;
  std::vector<double> center;
  double radius;

  static Domain l2_ball(std::vector<double> center, double diameter);
  static Domain linf_box(std::vector<double> center, double diameter);

  std::size_t dim() const { return center.size(); }
  double diameter() const;
  bool contains(const std::vector<double>& x, double tol = 1e-9) const;
};

// Euclidean projection onto the domain. Exact closed forms for both kinds.
std::vector<double> project(std::vector<double> x, const Domain& dom);

enum class OracleKind { ExactPlusGaussian, BernoulliHard, GaussianHard };

// Convex objective + domain + first-order stochastic oracle, immutable after
// construction. Two objective families:
//   piecewise-linear "hard" instance  f(x) = (2*B*delta/sqrt(d)) * sum_i |x(i) - m(i)|
//     with minimizer m = v * D / (2 sqrt(d)) at a corner of the l-inf box;
//   least squares                     f(x) = 0.5 * ||A x - b||^2  on a ball or box.
class ConvexProblem {
 public:
  // The hard instance lives on the l-inf box (half-width D/(2 sqrt(d))), the
  // only domain on which its constant-mean oracles stay unbiased everywhere.
  // v defaults to the all-ones sign pattern.
  static ConvexProblem hard_abs(std::size_t d, double diameter, double scale, double delta,
                                OracleKind oracle, std::vector<double> v = {});

  // a is rows x d, row-major. bound is the mean-square oracle bound B; pass 0
  // to make it tight (exact oracle, no added noise). Oracle kind is always
  // ExactPlusGaussian: exact subgradient plus N(0, tau^2 I) with
  // tau^2 = (B^2 - G_max^2)/d, G_max an upper bound on the gradient norm over
  // the domain.
  static ConvexProblem quadratic(std::size_t rows, std::size_t d, std::vector<double> a,
                                 std::vector<double> b, double diameter, double bound,
                                 DomainKind domain_kind);

  std::size_t dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  OracleKind oracle_kind() const { return oracle_kind_; }

  // Mean-square oracle bound actually honored: E[||g_hat||^2 | x] <= bound^2.
  double gradient_bound() const { return reported_bound_; }
  double optimum() const { return optimum_; }

  double objective(const std::vector<double>& x) const;  // rejects x outside the domain
  std::vector<double> subgradient(const std::vector<double>& x) const;  // zero at kinks
  std::vector<double> oracle(const std::vector<double>& x, Rng& rng) const;
  // Analytic E[oracle | x]; constant for the hard-instance oracles.
  std::vector<double> mean_gradient(const std::vector<double>& x) const;

  // Hard-instance accessors (throw for quadratic problems).
  double delta() const;
  const std::vector<double>& direction() const;

 private:
  enum class Objective { HardAbs, Quadratic };

  ConvexProblem(Objective obj, Domain dom) : objective_(obj), domain_(std::move(dom)) {}

  Objective objective_;
  Domain domain_;
  OracleKind oracle_kind_ = OracleKind::ExactPlusGaussian;
  double reported_bound_ = 0.0;
  double optimum_ = 0.0;
  double tau_ = 0.0;  // per-coordinate noise stddev for ExactPlusGaussian

  // hard instance
  double scale_ = 0.0;  // B in the objective
  double delta_ = 0.0;
  std::vector<double> v_;
  std::vector<double> minimizer_;

  // quadratic
  std::size_t rows_ = 0;
  std::vector<double> a_;   // rows x d
  std::vector<double> b_;
  std::vector<double> atb_; // A^T b
};

}  // namespace ota
