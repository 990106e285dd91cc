#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dsgdm/rng.hpp"

namespace dsgdm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ProblemKind { LeastSquares, MeanEstimation, Quadratic };

struct GradientSample {
  Vector value;
  bool is_stochastic = false;
};

// Analytic multi-agent objective with known optimum and known
// strategic-deviation closed forms.
//
//   least squares    f_i(x) = (x - z_i)' S (x - z_i) + label_noise_var
//   mean estimation  f_i(x) = ||x - mu_i||^2
//   quadratic        f_i(x) = (x - c_i)' A_i (x - c_i)
//
// All instances are immutable after construction; gradient sampling takes an
// explicit per-agent stream.
class ProblemInstance {
 public:
  // Least squares with common feature covariance S (symmetric positive
  // definite) and per-agent targets. Stochastic gradients draw a batch of
  // Gaussian features u ~ N(0, S) and labels u'z_i + noise.
  static ProblemInstance least_squares(std::vector<Vector> targets, Matrix s,
                                       double label_noise_var = 0.0, int batch = 1);
  // Mean estimation; sigma2 is the total sampling variance of a data point
  // (per-coordinate variance sigma2 / dim), as in the stochastic gradient
  // g = 2 (x - zeta), zeta ~ N(mu_i, (sigma2/dim) I).
  static ProblemInstance mean_estimation(std::vector<Vector> means, double sigma2);
  // Quadratic with per-agent symmetric positive semidefinite A_i whose sum is
  // positive definite. Stochastic gradients add N(0, noise_std^2) per
  // coordinate to the exact gradient.
  static ProblemInstance quadratic(std::vector<Matrix> a, std::vector<Vector> c,
                                   double noise_std = 0.0);

  ProblemKind kind() const { return kind_; }
  int n_agents() const { return static_cast<int>(targets_.size()); }
  int dim() const { return static_cast<int>(targets_.front().size()); }

  // Gradient-Lipschitz constant H = max_i lambda_max(hessian f_i).
  double smoothness() const { return smoothness_; }
  // Strong-convexity constant min_i lambda_min(hessian f_i); 0 for merely
  // convex instances.
  double strong_convexity() const { return strong_convexity_; }
  double sampling_sigma2() const { return sigma2_; }
  int batch() const { return batch_; }

  GradientSample stochastic_gradient(int agent, const Vector& theta,
                                     RngStream& rng) const;
  Vector exact_gradient(int agent, const Vector& theta) const;

  double f(int agent, const Vector& theta) const;
  double objective(const Vector& theta) const;  // F = (1/N) sum_i f_i

  Vector global_optimum() const;
  // Fixed point when `deviator` scales its gradients by a >= 1 and everyone
  // else is truthful. Least squares / mean estimation only.
  Vector deviated_optimum(int deviator, double a) const;

  struct DeviationDelta {
    double f_gain;  // f_i(opt) - f_i(deviated opt), the deviator's decrease
    double F_loss;  // additive increase of the global objective
  };
  DeviationDelta deviation_cost_delta(int deviator, double a) const;

  const Vector& target(int agent) const { return targets_[agent]; }
  const Matrix& covariance() const { return covariance_; }

 private:
  ProblemInstance() = default;

  ProblemKind kind_ = ProblemKind::MeanEstimation;
  std::vector<Vector> targets_;       // z_i / mu_i / c_i
  Matrix covariance_;                 // S (least squares)
  std::vector<Matrix> quad_;          // A_i (quadratic)
  Matrix quad_sum_;                   // sum_i A_i
  double label_noise_var_ = 0.0;      // sigma_xi^2, reporting only
  double sigma2_ = 0.0;               // sampling variance / noise_std^2
  int batch_ = 1;
  double smoothness_ = 0.0;
  double strong_convexity_ = 0.0;
  Matrix covariance_chol_;            // lower factor of S for feature draws
};

// Deterministic synthetic data helpers used by scenarios and tests.
std::vector<Vector> gaussian_targets(int n_agents, int dim, std::uint64_t seed,
                                     double spread = 1.0, double offset = 0.0);
// Rank-one quadratics with directions evenly spread on the unit circle
// (dim 2); per-agent curvature is singular while the aggregate is not.
void rank_one_quadratics(int n_agents, std::uint64_t seed,
                         std::vector<Matrix>* a, std::vector<Vector>* c);

}  // namespace dsgdm
