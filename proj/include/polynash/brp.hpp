#pragma once

#include <vector>

#include "polynash/game.hpp"
#include "polynash/graph.hpp"
#include "polynash/pseudoexpectation.hpp"

namespace polynash {

// Thresholds of the pursuit, defaulting to the analyzed constants. Small
// instances make ln^3(N) comparable to N, so the cutoff is overridable.
struct BrpConfig {
  double epsilon = 0.1;
  double bad_threshold = -1;     // K_1 cutoff on Delta(i); default 2*epsilon
  double smallset_cutoff = -1;   // default ln^3(N)
  double growth_density = 10.0;  // |H|/N multiplier in the Flag threshold
  double growth_log = 10.0;      // ln(N)/d multiplier in the Flag threshold
  int max_iterations = -1;       // default ceil(log4 N) + 5
  bool include_conditioned = true;
  std::vector<int> conditioned_players;  // reported separately

  double resolved_bad_threshold() const { return bad_threshold >= 0 ? bad_threshold : 2 * epsilon; }
  double resolved_smallset_cutoff(int n) const;
  int resolved_max_iterations(int n) const;
};

// Mixed-strategy table defined on a subset of the players.
struct PartialProduct {
  Eigen::MatrixXd mu;          // N x k; rows meaningful where assigned
  std::vector<char> assigned;  // player -> defined?

  int num_players() const { return static_cast<int>(mu.rows()); }
  ProductDistribution complete_uniform() const;  // unassigned rows -> uniform
};

// Indicator vector over the maximizing actions and its normalization.
struct BestResponseVector {
  Eigen::VectorXd psi;     // 0/1 per action
  Eigen::VectorXd lambda;  // psi / ||psi||_1
};

// Best response of player i against the assigned strategies of its
// neighbors outside `excluded`.
BestResponseVector best_response_vector(const RescaledGame& game, const PartialProduct& gamma,
                                        const std::vector<char>& excluded, int i);

// K_1 = { i : Delta(i) >= threshold }.
std::vector<int> initial_bad_set(const Pseudoexpectation& pe, const Graph& g, double threshold);

// Iterative closure of the seed set: repeatedly absorbs nodes with too large
// a neighbor fraction inside the most recent layer, until the layer is
// smaller than the cutoff.
std::vector<int> flag(const std::vector<int>& seed, const Graph& g, const BrpConfig& cfg);

struct BestRespondResult {
  PartialProduct gamma;
  std::vector<int> q;  // deferred players
};

// Assigns best responses to W minus the deferred set Q. For |W| above the
// cutoff, Q collects the members of W with at least an epsilon fraction of
// their neighbors inside W.
BestRespondResult best_respond(const std::vector<int>& w, const PartialProduct& gamma,
                               const RescaledGame& game, const Graph& g, const BrpConfig& cfg);

struct PursuitIteration {
  int t = 0;
  int k_size = 0;
  int w_size = 0;
  int q_size = 0;
  double max_phi_assigned = 0;  // Phi restricted to the assigned set
  double max_phi_global = 0;    // Phi with unassigned players filled uniform
};

struct PursuitTrace {
  std::vector<PursuitIteration> iterations;
  int termination_iteration = 0;
  bool converged = false;  // K_T became empty
};

struct PursuitResult {
  ProductDistribution gamma;
  PursuitTrace trace;
  Eigen::VectorXd per_player_phi;
  double max_phi = 0;               // headline (see include_conditioned)
  int argmax_player = -1;
  double max_phi_conditioned = 0;   // over the conditioned players only
};

// Algorithm: K_1 from the local correlations, then W = flag(K_t) and
// (Gamma_{t+1}, K_{t+1}) = best_respond(W, Gamma_t) until K empties or the
// iteration cap is reached (unassigned players then get uniform strategies).
PursuitResult best_response_pursuit(const Pseudoexpectation& pe, const RescaledGame& game,
                                    const Graph& g, const BrpConfig& cfg);

}  // namespace polynash
