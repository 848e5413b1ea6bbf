#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "polynash/common.hpp"

namespace polynash {

// Pure strategy profile: one action index in [0,k) per player.
struct PureProfile {
  std::vector<int> action;
};

// Edge-indexed payoff tables. pay_ij(a, b) is the payoff to i when i plays a
// and j plays b; pay_ji(b, a) is the payoff to j. Edges are unordered pairs
// with both directed tables present.
struct PolymatrixGame {
  struct Edge {
    int i = 0;
    int j = 0;
    Eigen::MatrixXd pay_ij;  // k x k, payoff to i
    Eigen::MatrixXd pay_ji;  // k x k, payoff to j
  };

  int num_players = 0;
  int num_actions = 0;
  std::vector<Edge> edges;

  void validate() const;  // throws Error on malformed games
};

// Product distribution over actions: mu(i, p) = P(player i plays p).
struct ProductDistribution {
  Eigen::MatrixXd mu;  // N x k

  int num_players() const { return static_cast<int>(mu.rows()); }
  int num_actions() const { return static_cast<int>(mu.cols()); }
  void validate(double tol = kTol) const;

  static ProductDistribution uniform(int n, int k);
  static ProductDistribution pure(const PureProfile& a, int k);
};

// Game with payoffs rescaled so each player's aggregate lies in [0, 1],
// together with the certified smoothness constant.
struct RescaledGame {
  PolymatrixGame base;
  int num_players = 0;
  int num_actions = 0;

  // Per player, sorted by neighbor id: (j, f_ij) with f_ij(a_i, a_j) the
  // rescaled payoff to this player.
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> neighbors;

  Eigen::VectorXd upper;   // U_i
  Eigen::VectorXd lower;   // L_i
  double smoothness = 0;   // L, certified: max |f| <= L / d
  double avg_degree = 0;   // d = 2|E| / N
  double max_abs_f = 0;
  int num_edges = 0;

  int degree(int i) const { return static_cast<int>(neighbors[i].size()); }

  // Aggregate rescaled payoff to player i under a pure profile.
  double pure_payoff(int i, const PureProfile& a) const;
};

RescaledGame rescale(const PolymatrixGame& game);

// Nash-condition value for player i: the expected gain of the best unilateral
// deviation under Gamma. Zero or negative means i is best-responding.
double phi(const RescaledGame& game, const ProductDistribution& gamma, int i);

Eigen::VectorXd phi_all(const RescaledGame& game, const ProductDistribution& gamma);

// Same, evaluated only over the neighbors of i inside Q (edges leaving Q
// ignored). in_q is a membership mask over players; i must be in Q.
double phi_restricted(const RescaledGame& game, const ProductDistribution& gamma,
                      const std::vector<char>& in_q, int i);

struct NashReport {
  bool pass = false;
  double max_phi = 0;
  int argmax_player = -1;
  Eigen::VectorXd per_player;
};

NashReport verify_epsilon_nash(const RescaledGame& game, const ProductDistribution& gamma,
                               double eps);

// Sum over players of expected aggregate rescaled payoff under Gamma.
double social_welfare(const RescaledGame& game, const ProductDistribution& gamma);

}  // namespace polynash
