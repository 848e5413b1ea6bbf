#include "polynash/graph.hpp"

#include <algorithm>
#include <random>

#include "polynash/game.hpp"

namespace polynash {

int Graph::num_edges() const {
  std::size_t deg_sum = 0;
  for (const auto& lst : adj) deg_sum += lst.size();
  return static_cast<int>(deg_sum / 2);
}

bool Graph::has_edge(int i, int j) const {
  return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < num_nodes; ++i)
    for (int j : adj[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

void Graph::validate() const {
  if (static_cast<int>(adj.size()) != num_nodes) throw Error("graph: adjacency size mismatch");
  for (int i = 0; i < num_nodes; ++i) {
    if (!std::is_sorted(adj[i].begin(), adj[i].end())) throw Error("graph: unsorted adjacency");
    for (int j : adj[i]) {
      if (j == i) throw Error("graph: self-loop");
      if (j < 0 || j >= num_nodes) throw Error("graph: neighbor out of range");
      if (!has_edge(j, i)) throw Error("graph: asymmetric adjacency");
    }
  }
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.num_nodes = n;
  g.adj.assign(n, {});
  for (auto [i, j] : edges) {
    g.adj[i].push_back(j);
    g.adj[j].push_back(i);
  }
  for (auto& lst : g.adj) std::sort(lst.begin(), lst.end());
  g.validate();
  return g;
}

namespace {
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

Graph sample_gnp(int n, double p, std::uint64_t seed) {
  if (n < 1) throw Error("sample_gnp: need at least one node");
  if (p < 0 || p > 1) throw Error("sample_gnp: p must lie in [0,1]");
  Graph g;
  g.num_nodes = n;
  g.seed = seed;
  g.edge_prob = p;
  g.adj.assign(n, {});
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }
    }
  }
  return g;
}

Graph graph_of(const PolymatrixGame& game) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(game.edges.size());
  for (const auto& e : game.edges) edges.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
  return Graph::from_edges(game.num_players, edges);
}

double neighbor_fraction(const Graph& g, int i, const std::vector<char>& in_s) {
  if (i < 0 || i >= g.num_nodes) throw Error("neighbor_fraction: node out of range");
  const double d = g.avg_degree();
  if (d == 0) return 0.0;
  int count = 0;
  for (int j : g.adj[i])
    if (in_s[j]) ++count;
  return count / d;
}

SpectralSummary threshold_rank(const Graph& g, double rho) {
  const double d = g.avg_degree();
  if (d <= 0) throw Error("threshold_rank: graph has no edges");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.num_nodes, g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i)
    for (int j : g.adj[i]) a(i, j) = 1.0 / d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw Error("threshold_rank: eigendecomposition failed");

  SpectralSummary s;
  s.rho = rho;
  s.eigenvalues = es.eigenvalues().reverse();
  s.tau = 0;
  for (int i = 0; i < s.eigenvalues.size(); ++i)
    if (s.eigenvalues(i) >= rho) ++s.tau;
  return s;
}

}  // namespace polynash
