#include "ota/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "ota/numeric.hpp"

namespace ota {

namespace {

double sgn0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// y = A x   (A rows x d, row-major)
std::vector<double> matvec(const std::vector<double>& a, std::size_t rows, std::size_t d,
                           const std::vector<double>& x) {
  std::vector<double> y(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += a[r * d + c] * x[c];
    y[r] = s;
  }
  return y;
}

// y = A^T x
std::vector<double> matvec_t(const std::vector<double>& a, std::size_t rows, std::size_t d,
                             const std::vector<double>& x) {
  std::vector<double> y(d, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < d; ++c) y[c] += a[r * d + c] * x[r];
  return y;
}

}  // namespace

Domain Domain::l2_ball(std::vector<double> center, double diameter) {
  if (center.empty()) throw std::invalid_argument("Domain: empty center");
  if (!(diameter > 0.0)) throw std::invalid_argument("Domain: diameter must be positive");
  return Domain{DomainKind::L2Ball, std::move(center), diameter / 2.0};
}

Domain Domain::linf_box(std::vector<double> center, double diameter) {
  if (center.empty()) throw std::invalid_argument("Domain: empty center");
  if (!(diameter > 0.0)) throw std::invalid_argument("Domain: diameter must be positive");
  const double half = diameter / (2.0 * std::sqrt(static_cast<double>(center.size())));
  return Domain{DomainKind::LinfBox, std::move(center), half};
}

double Domain::diameter() const {
  if (kind == DomainKind::L2Ball) return 2.0 * radius;
  return 2.0 * radius * std::sqrt(static_cast<double>(dim()));
}

bool Domain::contains(const std::vector<double>& x, double tol) const {
  if (x.size() != dim()) return false;
  if (kind == DomainKind::L2Ball) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - center[i];
      s += diff * diff;
    }
    return std::sqrt(s) <= radius * (1.0 + tol) + tol;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - center[i]) > radius * (1.0 + tol) + tol) return false;
  }
  return true;
}

std::vector<double> project(std::vector<double> x, const Domain& dom) {
  if (x.size() != dom.dim()) throw std::invalid_argument("project: dimension mismatch");
  if (dom.kind == DomainKind::L2Ball) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - dom.center[i];
      s += diff * diff;
    }
    const double dist = std::sqrt(s);
    if (dist <= dom.radius) return x;
    const double shrink = dom.radius / dist;
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = dom.center[i] + shrink * (x[i] - dom.center[i]);
    return x;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lo = dom.center[i] - dom.radius;
    const double hi = dom.center[i] + dom.radius;
    if (x[i] < lo) x[i] = lo;
    if (x[i] > hi) x[i] = hi;
  }
  return x;
}

ConvexProblem ConvexProblem::hard_abs(std::size_t d, double diameter, double scale, double delta,
                                      OracleKind oracle, std::vector<double> v) {
  if (d == 0) throw std::invalid_argument("hard_abs: d must be positive");
  if (!(diameter > 0.0) || !(scale > 0.0)) throw std::invalid_argument("hard_abs: D, B must be positive");
  if (!(delta > 0.0) || delta > 0.5) throw std::invalid_argument("hard_abs: delta must be in (0, 1/2]");
  if (v.empty()) v.assign(d, 1.0);
  if (v.size() != d) throw std::invalid_argument("hard_abs: v size mismatch");
  for (double s : v)
    if (s != 1.0 && s != -1.0) throw std::invalid_argument("hard_abs: v entries must be +-1");

  ConvexProblem p(Objective::HardAbs, Domain::linf_box(std::vector<double>(d, 0.0), diameter));
  p.scale_ = scale;
  p.delta_ = delta;
  p.v_ = std::move(v);
  p.oracle_kind_ = oracle;
  p.minimizer_.resize(d);
  const double corner = diameter / (2.0 * std::sqrt(static_cast<double>(d)));
  for (std::size_t i = 0; i < d; ++i) p.minimizer_[i] = p.v_[i] * corner;
  p.optimum_ = 0.0;

  switch (oracle) {
    case OracleKind::BernoulliHard:
      p.reported_bound_ = scale;
      break;
    case OracleKind::GaussianHard:
      // Mean -2*B*delta*v/sqrt(d) plus N(0, B^2/d I): second moment is
      // B^2 (1 + 4 delta^2), reported as the honored bound.
      p.reported_bound_ = scale * std::sqrt(1.0 + 4.0 * delta * delta);
      break;
    case OracleKind::ExactPlusGaussian: {
      const double gmax = 2.0 * scale * delta;  // subgradient norm away from kinks
      p.reported_bound_ = scale;
      p.tau_ = std::sqrt((scale * scale - gmax * gmax) / static_cast<double>(d));
      break;
    }
  }
  return p;
}

ConvexProblem ConvexProblem::quadratic(std::size_t rows, std::size_t d, std::vector<double> a,
                                       std::vector<double> b, double diameter, double bound,
                                       DomainKind domain_kind) {
  if (rows == 0 || d == 0) throw std::invalid_argument("quadratic: empty shape");
  if (a.size() != rows * d || b.size() != rows) throw std::invalid_argument("quadratic: bad A/b size");
  if (!(diameter > 0.0)) throw std::invalid_argument("quadratic: diameter must be positive");

  Domain dom = domain_kind == DomainKind::L2Ball
                   ? Domain::l2_ball(std::vector<double>(d, 0.0), diameter)
                   : Domain::linf_box(std::vector<double>(d, 0.0), diameter);
  ConvexProblem p(Objective::Quadratic, std::move(dom));
  p.rows_ = rows;
  p.a_ = std::move(a);
  p.b_ = std::move(b);
  p.atb_ = matvec_t(p.a_, rows, d, p.b_);
  p.oracle_kind_ = OracleKind::ExactPlusGaussian;

  // Gradient A^T(Ax - b) = M(x - c) + (Mc - A^T b), M = A^T A. Over either
  // domain the circumradius around the center is D/2, and ||M||_F bounds the
  // operator norm from above, so gmax is a safe overestimate of the true
  // maximum gradient norm (tau errs small, the B^2 bound stays honored).
  double m_frob2 = 0.0;
  std::vector<double> m(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += p.a_[r * d + i] * p.a_[r * d + j];
      m[i * d + j] = s;
      m_frob2 += s * s;
    }
  const double lips = std::sqrt(m_frob2);
  std::vector<double> grad_center = p.atb_;
  for (double& g : grad_center) g = -g;  // gradient at the origin center: -A^T b
  const double gmax = lips * (diameter / 2.0) + norm(grad_center);

  if (bound == 0.0) {
    p.reported_bound_ = gmax > 0.0 ? gmax : 1.0;
    p.tau_ = 0.0;
  } else {
    if (bound < gmax)
      throw std::invalid_argument("quadratic: bound below worst-case gradient norm");
    p.reported_bound_ = bound;
    p.tau_ = std::sqrt((bound * bound - gmax * gmax) / static_cast<double>(d));
  }

  // Constrained optimum by deterministic projected gradient descent.
  if (lips == 0.0) {
    p.optimum_ = 0.5 * squared_norm(p.b_);
  } else {
    std::vector<double> x = p.domain_.center;
    const double step = 1.0 / lips;
    for (int it = 0; it < 200000; ++it) {
      std::vector<double> g = p.subgradient(x);
      std::vector<double> next(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] - step * g[i];
      next = project(std::move(next), p.domain_);
      double move = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) move += (next[i] - x[i]) * (next[i] - x[i]);
      x = std::move(next);
      if (std::sqrt(move) <= 1e-15 * (1.0 + norm(x))) break;
    }
    std::vector<double> res = matvec(p.a_, rows, d, x);
    for (std::size_t r = 0; r < rows; ++r) res[r] -= p.b_[r];
    p.optimum_ = 0.5 * squared_norm(res);
  }
  return p;
}

double ConvexProblem::objective(const std::vector<double>& x) const {
  if (x.size() != dim()) throw std::invalid_argument("objective: dimension mismatch");
  if (!domain_.contains(x)) throw std::invalid_argument("objective: x outside the domain");
  if (objective_ == Objective::HardAbs) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - minimizer_[i]);
    return (2.0 * scale_ * delta_ / std::sqrt(static_cast<double>(dim()))) * s;
  }
  std::vector<double> res = matvec(a_, rows_, dim(), x);
  for (std::size_t r = 0; r < rows_; ++r) res[r] -= b_[r];
  return 0.5 * squared_norm(res);
}

std::vector<double> ConvexProblem::subgradient(const std::vector<double>& x) const {
  if (x.size() != dim()) throw std::invalid_argument("subgradient: dimension mismatch");
  if (objective_ == Objective::HardAbs) {
    const double m = 2.0 * scale_ * delta_ / std::sqrt(static_cast<double>(dim()));
    std::vector<double> g(dim());
    for (std::size_t i = 0; i < dim(); ++i) g[i] = m * sgn0(x[i] - minimizer_[i]);
    return g;
  }
  std::vector<double> res = matvec(a_, rows_, dim(), x);
  for (std::size_t r = 0; r < rows_; ++r) res[r] -= b_[r];
  return matvec_t(a_, rows_, dim(), res);
}

std::vector<double> ConvexProblem::oracle(const std::vector<double>& x, Rng& rng) const {
  if (x.size() != dim()) throw std::invalid_argument("oracle: dimension mismatch");
  if (!domain_.contains(x)) throw std::invalid_argument("oracle: x outside the domain");
  const double root_d = std::sqrt(static_cast<double>(dim()));
  switch (oracle_kind_) {
    case OracleKind::BernoulliHard: {
      std::vector<double> g(dim());
      for (std::size_t i = 0; i < dim(); ++i) {
        const double p_minus = 0.5 * (1.0 + 2.0 * delta_ * v_[i]);
        g[i] = (rng.uniform() < p_minus ? -scale_ : scale_) / root_d;
      }
      return g;
    }
    case OracleKind::GaussianHard: {
      std::vector<double> g(dim());
      const double drift = -2.0 * scale_ * delta_ / root_d;
      const double noise = scale_ / root_d;
      for (std::size_t i = 0; i < dim(); ++i) g[i] = drift * v_[i] + rng.gaussian(noise);
      return g;
    }
    case OracleKind::ExactPlusGaussian: {
      std::vector<double> g = subgradient(x);
      if (tau_ > 0.0)
        for (double& gi : g) gi += rng.gaussian(tau_);
      return g;
    }
  }
  throw std::logic_error("oracle: unreachable");
}

std::vector<double> ConvexProblem::mean_gradient(const std::vector<double>& x) const {
  if (oracle_kind_ == OracleKind::ExactPlusGaussian) return subgradient(x);
  const double drift = -2.0 * scale_ * delta_ / std::sqrt(static_cast<double>(dim()));
  std::vector<double> g(dim());
  for (std::size_t i = 0; i < dim(); ++i) g[i] = drift * v_[i];
  return g;
}

double ConvexProblem::delta() const {
  if (objective_ != Objective::HardAbs) throw std::logic_error("delta: not a hard instance");
  return delta_;
}

const std::vector<double>& ConvexProblem::direction() const {
  if (objective_ != Objective::HardAbs) throw std::logic_error("direction: not a hard instance");
  return v_;
}

}  // namespace ota
