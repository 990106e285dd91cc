#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dsgdm {

// Undirected communication graph over agents 0..n-1. No self loops; edges are
// stored once as (i, j) with i < j.
class Graph {
 public:
  Graph(int n_agents, std::vector<std::pair<int, int>> edges);

  static Graph ring(int n);
  static Graph path(int n);
  static Graph complete(int n);
  static Graph star(int n);  // agent 0 is the hub

  int n_agents() const { return n_agents_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  int min_degree() const;
  bool adjacent(int i, int j) const;
  bool connected() const;

 private:
  int n_agents_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> neighbors_;
};

enum class WeightRule { Metropolis, Uniform };

// Symmetric doubly stochastic coupling matrix over a connected graph, with
// w_ij > 0 exactly on edges, rows summing to one, and spectral quantity
// rho = max(|pi_2|, |pi_N|) < 1.
class CouplingMatrix {
 public:
  // Ring of n agents with off-diagonal neighbor weight w in (0, 1/2).
  static CouplingMatrix ring(int n, double w);
  // Metropolis rule (1 / (1 + max(deg_i, deg_j))) or uniform edge weight.
  static CouplingMatrix from_graph(const Graph& g, WeightRule rule,
                                   double uniform_w = 0.0);

  const Eigen::MatrixXd& weights() const { return weights_; }
  double rho() const { return rho_; }
  int size() const { return static_cast<int>(weights_.rows()); }
  const Graph& graph() const { return graph_; }

 private:
  CouplingMatrix(Graph g, Eigen::MatrixXd w);

  Graph graph_;
  Eigen::MatrixXd weights_;
  double rho_;
};

// rho of a symmetric stochastic matrix: largest absolute eigenvalue with the
// leading eigenvalue 1 excluded. Rejects rho >= 1 - 1e-12 (disconnected or
// bipartite-degenerate configuration).
double spectral_gap(const Eigen::MatrixXd& w);

}  // namespace dsgdm
