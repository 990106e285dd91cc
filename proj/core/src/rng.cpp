#include "dsgdm/rng.hpp"

namespace dsgdm {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t agent,
                                StreamPurpose purpose) {
  // Mix the components through two splitmix steps; plain xor would let
  // (agent, purpose) pairs collide.
  std::uint64_t s = master_seed;
  std::uint64_t k = splitmix64(s);
  s = k ^ (agent * 0x2545f4914f6cdd1dULL);
  k = splitmix64(s);
  s = k ^ (static_cast<std::uint64_t>(purpose) * 0xda942042e4dd58b5ULL);
  return splitmix64(s);
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  std::uint64_t s = master_seed ^ (0x9e6c63d0876a9a47ULL + run_index);
  std::uint64_t k = splitmix64(s);
  s = k + run_index;
  return splitmix64(s);
}

RngStream::RngStream(std::uint64_t key) : engine_(key) {}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::laplace_unit() {
  // Difference of two unit exponentials is Laplace(0, 1) with variance 2.
  const double x = exponential_(engine_) - exponential_(engine_);
  return x * 0.7071067811865476;  // 1/sqrt(2), unit variance
}

Eigen::VectorXd RngStream::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Eigen::VectorXd RngStream::laplace_unit_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = laplace_unit();
  return v;
}

}  // namespace dsgdm
