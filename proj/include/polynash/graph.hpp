#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "polynash/common.hpp"

namespace polynash {

struct PolymatrixGame;

struct Graph {
  int num_nodes = 0;
  std::uint64_t seed = 0;
  double edge_prob = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists

  int num_edges() const;
  double avg_degree() const { return num_nodes > 0 ? 2.0 * num_edges() / num_nodes : 0.0; }
  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  bool has_edge(int i, int j) const;
  std::vector<std::pair<int, int>> edge_list() const;  // i < j, sorted

  void validate() const;

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
};

// G(N,p) sample; each unordered pair included independently with probability
// p, deterministically for a fixed seed.
Graph sample_gnp(int n, double p, std::uint64_t seed);

// Graph carrying exactly the game's edges.
Graph graph_of(const PolymatrixGame& game);

// |N(i) ∩ S| / d, with d the average degree.
double neighbor_fraction(const Graph& g, int i, const std::vector<char>& in_s);

struct SpectralSummary {
  Eigen::VectorXd eigenvalues;  // of A/d, descending
  double rho = 0;
  int tau = 0;  // |{ i : lambda_i >= rho }|
};

// Dense symmetric eigendecomposition of the degree-normalized adjacency
// matrix A/d. Requires at least one edge.
SpectralSummary threshold_rank(const Graph& g, double rho);

}  // namespace polynash
