#include "polynash/brp.hpp"

#include <algorithm>
#include <cmath>

#include "polynash/kernels.hpp"

namespace polynash {

double BrpConfig::resolved_smallset_cutoff(int n) const {
  if (smallset_cutoff >= 0) return smallset_cutoff;
  const double ln = std::log(static_cast<double>(n));
  return ln * ln * ln;
}

int BrpConfig::resolved_max_iterations(int n) const {
  if (max_iterations > 0) return max_iterations;
  return static_cast<int>(std::ceil(std::log(std::max(n, 2)) / std::log(4.0))) + 5;
}

ProductDistribution PartialProduct::complete_uniform() const {
  ProductDistribution g;
  g.mu = mu;
  const int k = static_cast<int>(mu.cols());
  for (int i = 0; i < num_players(); ++i)
    if (!assigned[i]) g.mu.row(i).setConstant(1.0 / k);
  return g;
}

BestResponseVector best_response_vector(const RescaledGame& game, const PartialProduct& gamma,
                                        const std::vector<char>& excluded, int i) {
  const int k = game.num_actions;
  Eigen::VectorXd values = Eigen::VectorXd::Zero(k);
  for (const auto& [j, f] : game.neighbors[i]) {
    if (excluded[j]) continue;
    if (!gamma.assigned[j]) throw Error("best_response_vector: neighbor strategy undefined");
    values += f * gamma.mu.row(j).transpose();
  }
  const double top = values.maxCoeff();
  BestResponseVector out;
  out.psi = Eigen::VectorXd::Zero(k);
  for (int p = 0; p < k; ++p)
    if (values(p) >= top) out.psi(p) = 1.0;
  out.lambda = out.psi / out.psi.sum();
  return out;
}

std::vector<int> initial_bad_set(const Pseudoexpectation& pe, const Graph& g, double threshold) {
  const Eigen::VectorXd delta = kernels::local_correlation_profile(pe, g);
  std::vector<int> k1;
  for (int i = 0; i < g.num_nodes; ++i)
    if (delta(i) >= threshold) k1.push_back(i);
  return k1;
}

std::vector<int> flag(const std::vector<int>& seed, const Graph& g, const BrpConfig& cfg) {
  const int n = g.num_nodes;
  const double d = g.avg_degree();
  const double cutoff = cfg.resolved_smallset_cutoff(n);
  const double log_n = std::log(static_cast<double>(n));

  std::vector<char> in_w(n, 0);
  for (int i : seed) in_w[i] = 1;
  std::vector<int> w = seed;
  std::sort(w.begin(), w.end());
  std::vector<int> h_old = w;

  for (int guard = 0; guard < n; ++guard) {
    if (static_cast<double>(h_old.size()) < cutoff) break;
    const double threshold =
        std::max(cfg.growth_density * static_cast<double>(h_old.size()) / n,
                 d > 0 ? cfg.growth_log * log_n / d : std::numeric_limits<double>::infinity());
    std::vector<char> in_h(n, 0);
    for (int i : h_old) in_h[i] = 1;
    std::vector<int> h_new;
    for (int i = 0; i < n; ++i) {
      if (in_w[i]) continue;
      int count = 0;
      for (int j : g.adj[i])
        if (in_h[j]) ++count;
      if (d > 0 && count / d >= threshold) h_new.push_back(i);
    }
    if (h_new.empty()) break;
    for (int i : h_new) in_w[i] = 1;
    w.insert(w.end(), h_new.begin(), h_new.end());
    h_old = std::move(h_new);
  }
  std::sort(w.begin(), w.end());
  return w;
}

BestRespondResult best_respond(const std::vector<int>& w, const PartialProduct& gamma,
                               const RescaledGame& game, const Graph& g, const BrpConfig& cfg) {
  const int n = g.num_nodes;
  std::vector<char> in_w(n, 0);
  for (int i : w) in_w[i] = 1;

  BestRespondResult out;
  out.gamma = gamma;

  // Deferred set: empty in the small-set regime, otherwise the members of W
  // with an epsilon fraction of their neighborhood inside W.
  if (static_cast<double>(w.size()) > cfg.resolved_smallset_cutoff(n)) {
    for (int i : w) {
      const int deg = g.degree(i);
      if (deg == 0) continue;
      int inside = 0;
      for (int j : g.adj[i])
        if (in_w[j]) ++inside;
      if (static_cast<double>(inside) / deg >= cfg.epsilon) out.q.push_back(i);
    }
  }

  std::vector<char> in_q(n, 0);
  for (int i : out.q) in_q[i] = 1;
  for (int i : w) {
    if (in_q[i]) {
      out.gamma.assigned[i] = 0;
      continue;
    }
    const BestResponseVector br = best_response_vector(game, gamma, in_w, i);
    out.gamma.mu.row(i) = br.lambda.transpose();
    out.gamma.assigned[i] = 1;
  }
  return out;
}

namespace {

double max_phi_over_assigned(const RescaledGame& game, const PartialProduct& gamma) {
  std::vector<char> in_q(gamma.assigned.begin(), gamma.assigned.end());
  ProductDistribution full = gamma.complete_uniform();
  double worst = 0;
  for (int i = 0; i < game.num_players; ++i)
    if (in_q[i]) worst = std::max(worst, phi_restricted(game, full, in_q, i));
  return worst;
}

}  // namespace

PursuitResult best_response_pursuit(const Pseudoexpectation& pe, const RescaledGame& game,
                                    const Graph& g, const BrpConfig& cfg) {
  const int n = game.num_players;
  const ProductDistribution mu = pe.marginals();

  std::vector<int> k_cur = initial_bad_set(pe, g, cfg.resolved_bad_threshold());

  PartialProduct gamma;
  gamma.mu = mu.mu;
  gamma.assigned.assign(n, 1);
  for (int i : k_cur) gamma.assigned[i] = 0;

  PursuitResult result;
  PursuitTrace& trace = result.trace;
  const int cap = cfg.resolved_max_iterations(n);

  int t = 0;
  while (!k_cur.empty() && t < cap) {
    ++t;
    const std::vector<int> w = flag(k_cur, g, cfg);
    BestRespondResult step = best_respond(w, gamma, game, g, cfg);

    PursuitIteration rec;
    rec.t = t;
    rec.k_size = static_cast<int>(k_cur.size());
    rec.w_size = static_cast<int>(w.size());
    rec.q_size = static_cast<int>(step.q.size());
    rec.max_phi_assigned = max_phi_over_assigned(game, step.gamma);
    rec.max_phi_global =
        verify_epsilon_nash(game, step.gamma.complete_uniform(), 1.0).max_phi;
    trace.iterations.push_back(rec);

    gamma = std::move(step.gamma);
    k_cur = std::move(step.q);
  }
  trace.termination_iteration = t;
  trace.converged = k_cur.empty();

  result.gamma = gamma.complete_uniform();  // unassigned players get uniform
  result.per_player_phi = phi_all(game, result.gamma);

  std::vector<char> conditioned(n, 0);
  for (int i : cfg.conditioned_players)
    if (i >= 0 && i < n) conditioned[i] = 1;
  result.max_phi = 0;
  result.argmax_player = -1;
  result.max_phi_conditioned = 0;
  for (int i = 0; i < n; ++i) {
    if (conditioned[i]) result.max_phi_conditioned =
        std::max(result.max_phi_conditioned, result.per_player_phi(i));
    if (conditioned[i] && !cfg.include_conditioned) continue;
    if (result.argmax_player < 0 || result.per_player_phi(i) > result.max_phi) {
      result.max_phi = result.per_player_phi(i);
      result.argmax_player = i;
    }
  }
  return result;
}

}  // namespace polynash
