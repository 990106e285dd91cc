#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dsgdm {

// Stream key derivation. One master seed deterministically derives an
// independent stream per (agent, purpose) so that adding a new consumer never
// perturbs the draws seen by existing ones, and so that paired runs (same
// master seed, different strategies) share their sampling noise.
enum class StreamPurpose : std::uint64_t {
  Init = 1,         // initial parameter draws
  Gradient = 2,     // data sampling for stochastic gradients
  ActionNoise = 3,  // noise injected by strategic actions
  ProblemData = 4,  // synthetic per-agent problem data
  Aux = 5,
};

std::uint64_t splitmix64(std::uint64_t& state);

// Key for an (agent, purpose) stream under a master seed.
std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t agent,
                                StreamPurpose purpose);

// Seed for the k-th replicate of a multi-seed experiment.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index);

// A single private random stream. Wraps a mersenne engine seeded from a
// derived key; owns its distribution state so streams never interact.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key);

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  // Laplace with zero mean and unit variance (scale 1/sqrt(2)).
  double laplace_unit();

  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::VectorXd laplace_unit_vector(Eigen::Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
};

}  // namespace dsgdm
