#include "dsgdm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "dsgdm/errors.hpp"

namespace dsgdm {

namespace {
constexpr double kStochasticTol = 1e-12;
}

Graph::Graph(int n_agents, std::vector<std::pair<int, int>> edges)
    : n_agents_(n_agents), edges_(std::move(edges)) {
  if (n_agents_ < 2) throw ConfigError("graph needs at least 2 agents");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges_) {
    if (a > b) std::swap(a, b);
    if (a == b) throw ConfigError("self loop on agent " + std::to_string(a));
    if (a < 0 || b >= n_agents_) throw ConfigError("edge endpoint out of range");
    if (!seen.insert({a, b}).second) throw ConfigError("duplicate edge");
  }
  std::sort(edges_.begin(), edges_.end());
  degrees_.assign(n_agents_, 0);
  neighbors_.assign(n_agents_, {});
  for (const auto& [a, b] : edges_) {
    ++degrees_[a];
    ++degrees_[b];
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

Graph Graph::ring(int n) {
  if (n < 3) throw ConfigError("ring needs n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e));
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph Graph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph Graph::star(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, std::move(e));
}

int Graph::min_degree() const {
  return *std::min_element(degrees_.begin(), degrees_.end());
}

bool Graph::adjacent(int i, int j) const {
  const auto& nb = neighbors_[i];
  return std::binary_search(nb.begin(), nb.end(), j);
}

bool Graph::connected() const {
  std::vector<char> visited(n_agents_, 0);
  std::vector<int> stack = {0};
  visited[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : neighbors_[u]) {
      if (!visited[v]) {
        visited[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n_agents_;
}

double spectral_gap(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w);
  if (solver.info() != Eigen::Success)
    throw ConfigError("eigendecomposition of coupling matrix failed");
  const auto& ev = solver.eigenvalues();  // ascending
  const Eigen::Index n = ev.size();
  if (std::abs(ev[n - 1] - 1.0) > 1e-9)
    throw ConfigError("leading eigenvalue of coupling matrix is not 1");
  double rho = std::abs(ev[0]);
  if (n >= 2) rho = std::max(rho, std::abs(ev[n - 2]));
  if (rho >= 1.0 - kStochasticTol)
    throw ConfigError("spectral quantity rho >= 1: disconnected or degenerate coupling");
  return rho;
}

CouplingMatrix::CouplingMatrix(Graph g, Eigen::MatrixXd w)
    : graph_(std::move(g)), weights_(std::move(w)), rho_(0.0) {
  const int n = graph_.n_agents();
  if (!graph_.connected()) throw ConfigError("communication graph is not connected");
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double wij = weights_(i, j);
      if (wij < 0.0)
        throw ConfigError("negative coupling weight at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      if (i != j && (wij > 0.0) != graph_.adjacent(i, j))
        throw ConfigError("coupling weight sparsity does not match the graph");
      row += wij;
    }
    if (std::abs(row - 1.0) > kStochasticTol)
      throw ConfigError("row " + std::to_string(i) + " of coupling matrix sums to " +
                        std::to_string(row));
  }
  if ((weights_ - weights_.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw ConfigError("coupling matrix is not symmetric");
  rho_ = spectral_gap(weights_);
}

CouplingMatrix CouplingMatrix::ring(int n, double w) {
  if (n < 3) throw ConfigError("ring coupling needs n >= 3");
  if (!(w > 0.0 && 2.0 * w < 1.0))
    throw ConfigError("ring weight must lie in (0, 1/2); got " + std::to_string(w));
  Graph g = Graph::ring(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 1.0 - 2.0 * w;
    m(i, (i + 1) % n) = w;
    m(i, (i + n - 1) % n) = w;
  }
  return CouplingMatrix(std::move(g), std::move(m));
}

CouplingMatrix CouplingMatrix::from_graph(const Graph& g, WeightRule rule,
                                          double uniform_w) {
  if (!g.connected()) throw ConfigError("communication graph is not connected");
  const int n = g.n_agents();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const auto& deg = g.degrees();
  for (const auto& [a, b] : g.edges()) {
    double w;
    if (rule == WeightRule::Metropolis) {
      w = 1.0 / (1.0 + std::max(deg[a], deg[b]));
    } else {
      if (!(uniform_w > 0.0)) throw ConfigError("uniform weight must be positive");
      w = uniform_w;
    }
    m(a, b) = w;
    m(b, a) = w;
  }
  for (int i = 0; i < n; ++i) {
    const double off = m.row(i).sum();
    if (off > 1.0 + 1e-15)
      throw ConfigError("off-diagonal weights of agent " + std::to_string(i) +
                        " sum to " + std::to_string(off) + " > 1");
    m(i, i) = 1.0 - off;
  }
  return CouplingMatrix(g, std::move(m));
}

}  // namespace dsgdm
