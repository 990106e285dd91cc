#include "dsgdm/problems.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dsgdm/errors.hpp"

namespace dsgdm {

namespace {

void check_targets(const std::vector<Vector>& t) {
  if (t.size() < 2) throw ConfigError("problem needs at least 2 agents");
  const Eigen::Index d = t.front().size();
  if (d < 1) throw ConfigError("problem dimension must be positive");
  for (const auto& v : t)
    if (v.size() != d) throw ConfigError("per-agent target dimensions differ");
}

void check_finite(const Vector& theta) {
  if (!theta.allFinite()) throw DivergenceError("non-finite parameter vector");
}

}  // namespace

ProblemInstance ProblemInstance::least_squares(std::vector<Vector> targets, Matrix s,
                                               double label_noise_var, int batch) {
  check_targets(targets);
  const Eigen::Index d = targets.front().size();
  if (s.rows() != d || s.cols() != d) throw ConfigError("covariance dimension mismatch");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("covariance must be positive definite");
  if (label_noise_var < 0.0) throw ConfigError("label noise variance must be >= 0");
  if (batch < 1) throw ConfigError("batch size must be >= 1");

  ProblemInstance p;
  p.kind_ = ProblemKind::LeastSquares;
  p.targets_ = std::move(targets);
  p.covariance_ = std::move(s);
  p.covariance_chol_ = Eigen::LLT<Matrix>(p.covariance_).matrixL();
  p.label_noise_var_ = label_noise_var;
  p.batch_ = batch;
  p.smoothness_ = 2.0 * es.eigenvalues().maxCoeff();
  p.strong_convexity_ = 2.0 * es.eigenvalues().minCoeff();
  p.sigma2_ = label_noise_var;
  return p;
}

ProblemInstance ProblemInstance::mean_estimation(std::vector<Vector> means,
                                                 double sigma2) {
  check_targets(means);
  if (sigma2 < 0.0) throw ConfigError("sampling variance must be >= 0");
  ProblemInstance p;
  p.kind_ = ProblemKind::MeanEstimation;
  p.targets_ = std::move(means);
  p.sigma2_ = sigma2;
  p.smoothness_ = 2.0;
  p.strong_convexity_ = 2.0;
  return p;
}

ProblemInstance ProblemInstance::quadratic(std::vector<Matrix> a, std::vector<Vector> c,
                                           double noise_std) {
  check_targets(c);
  if (a.size() != c.size()) throw ConfigError("quadratic needs one matrix per agent");
  if (noise_std < 0.0) throw ConfigError("gradient noise std must be >= 0");
  const Eigen::Index d = c.front().size();
  double hmax = 0.0;
  double mu_min = std::numeric_limits<double>::infinity();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& m : a) {
    if (m.rows() != d || m.cols() != d) throw ConfigError("quadratic matrix dimension mismatch");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw ConfigError("quadratic matrices must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-12) throw ConfigError("quadratic matrices must be positive semidefinite");
    hmax = std::max(hmax, es.eigenvalues().maxCoeff());
    mu_min = std::min(mu_min, std::max(lo, 0.0));
    sum += m;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> agg(sum);
  if (agg.eigenvalues().minCoeff() <= 1e-12)
    throw ConfigError("aggregate quadratic curvature is singular; optimum undefined");

  ProblemInstance p;
  p.kind_ = ProblemKind::Quadratic;
  p.targets_ = std::move(c);
  p.quad_ = std::move(a);
  p.quad_sum_ = std::move(sum);
  p.sigma2_ = noise_std * noise_std;
  p.smoothness_ = 2.0 * hmax;
  p.strong_convexity_ = 2.0 * mu_min;
  return p;
}

GradientSample ProblemInstance::stochastic_gradient(int agent, const Vector& theta,
                                                    RngStream& rng) const {
  check_finite(theta);
  const Eigen::Index d = theta.size();
  switch (kind_) {
    case ProblemKind::MeanEstimation: {
      if (sigma2_ == 0.0) return {exact_gradient(agent, theta), false};
      const double coord_std = std::sqrt(sigma2_ / static_cast<double>(d));
      Vector zeta = targets_[agent] + coord_std * rng.normal_vector(d);
      return {2.0 * (theta - zeta), true};
    }
    case ProblemKind::LeastSquares: {
      Vector g = Vector::Zero(d);
      const double label_std = std::sqrt(label_noise_var_);
      for (int b = 0; b < batch_; ++b) {
        Vector u = covariance_chol_ * rng.normal_vector(d);
        const double label = u.dot(targets_[agent]) + label_std * rng.normal();
        g += 2.0 * (u.dot(theta) - label) * u;
      }
      return {g / static_cast<double>(batch_), true};
    }
    case ProblemKind::Quadratic: {
      Vector g = exact_gradient(agent, theta);
      if (sigma2_ == 0.0) return {std::move(g), false};
      g += std::sqrt(sigma2_) * rng.normal_vector(d);
      return {std::move(g), true};
    }
  }
  throw ConfigError("unreachable problem kind");
}

Vector ProblemInstance::exact_gradient(int agent, const Vector& theta) const {
  check_finite(theta);
  switch (kind_) {
    case ProblemKind::LeastSquares:
      return 2.0 * (covariance_ * (theta - targets_[agent]));
    case ProblemKind::MeanEstimation:
      return 2.0 * (theta - targets_[agent]);
    case ProblemKind::Quadratic:
      return 2.0 * (quad_[agent] * (theta - targets_[agent]));
  }
  throw ConfigError("unreachable problem kind");
}

double ProblemInstance::f(int agent, const Vector& theta) const {
  const Vector d = theta - targets_[agent];
  switch (kind_) {
    case ProblemKind::LeastSquares:
      return d.dot(covariance_ * d) + label_noise_var_;
    case ProblemKind::MeanEstimation:
      return d.squaredNorm();
    case ProblemKind::Quadratic:
      return d.dot(quad_[agent] * d);
  }
  throw ConfigError("unreachable problem kind");
}

double ProblemInstance::objective(const Vector& theta) const {
  double sum = 0.0;
  for (int i = 0; i < n_agents(); ++i) sum += f(i, theta);
  return sum / n_agents();
}

Vector ProblemInstance::global_optimum() const {
  const int n = n_agents();
  if (kind_ == ProblemKind::Quadratic) {
    Vector rhs = Vector::Zero(dim());
    for (int i = 0; i < n; ++i) rhs += quad_[i] * targets_[i];
    return quad_sum_.ldlt().solve(rhs);
  }
  Vector mean = Vector::Zero(dim());
  for (const auto& t : targets_) mean += t;
  return mean / n;
}

Vector ProblemInstance::deviated_optimum(int deviator, double a) const {
  if (kind_ == ProblemKind::Quadratic)
    throw ConfigError("deviated optimum closed form requires least squares or mean estimation");
  if (a < 1.0) throw ConfigError("scaling factor must be >= 1");
  const double n = n_agents();
  const double wi = (a - 1.0) / (a + n - 1.0);
  const double wbar = n / (a + n - 1.0);
  return wi * targets_[deviator] + wbar * global_optimum();
}

ProblemInstance::DeviationDelta ProblemInstance::deviation_cost_delta(int deviator,
                                                                      double a) const {
  if (kind_ == ProblemKind::Quadratic)
    throw ConfigError("deviation closed form requires least squares or mean estimation");
  if (a < 1.0) throw ConfigError("scaling factor must be >= 1");
  const double n = n_agents();
  const Vector diff = global_optimum() - targets_[deviator];
  const double q = kind_ == ProblemKind::LeastSquares ? diff.dot(covariance_ * diff)
                                                      : diff.squaredNorm();
  const double shrink = n / (a + n - 1.0);
  const double shift = (a - 1.0) / (a + n - 1.0);
  return {(1.0 - shrink * shrink) * q, shift * shift * q};
}

std::vector<Vector> gaussian_targets(int n_agents, int dim, std::uint64_t seed,
                                     double spread, double offset) {
  RngStream rng(derive_stream_key(seed, 0, StreamPurpose::ProblemData));
  std::vector<Vector> out;
  out.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i)
    out.push_back(spread * rng.normal_vector(dim) + Vector::Constant(dim, offset));
  return out;
}

void rank_one_quadratics(int n_agents, std::uint64_t seed, std::vector<Matrix>* a,
                         std::vector<Vector>* c) {
  RngStream rng(derive_stream_key(seed, 1, StreamPurpose::ProblemData));
  a->clear();
  c->clear();
  for (int i = 0; i < n_agents; ++i) {
    const double ang = 2.0 * M_PI * i / n_agents;
    Vector v(2);
    v << std::cos(ang), std::sin(ang);
    a->push_back(v * v.transpose());
    c->push_back(rng.normal_vector(2));
  }
}

}  // namespace dsgdm
