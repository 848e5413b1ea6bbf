#pragma once

#include <optional>
#include <vector>

#include "polynash/constraints.hpp"
#include "polynash/game.hpp"
#include "polynash/pseudoexpectation.hpp"
#include "polynash/solver.hpp"

namespace polynash {

// Explicit joint distribution over [k]^N; enumerable regime only.
struct JointDistribution {
  int num_players = 0;
  int num_actions = 0;
  std::vector<double> prob;  // index = sum_i a_i * k^i

  std::size_t profile_index(const PureProfile& a) const;
  PureProfile profile_of(std::size_t idx) const;
  void validate(double tol = kTol) const;

  // Exact multilinear moments of the joint law.
  Pseudoexpectation to_pseudoexpectation(int degree,
                                         std::uint64_t cap = enumeration_cap()) const;
  JointDistribution conditioned(int player, int action) const;
  Eigen::MatrixXd pairwise(int i, int j) const;
  ProductDistribution marginals() const;

  static JointDistribution from_product(const ProductDistribution& gamma,
                                        std::uint64_t cap = enumeration_cap());
};

// All profiles with no strictly improving unilateral deviation.
std::vector<PureProfile> enumerate_pure_nash(const RescaledGame& game,
                                             std::uint64_t cap = enumeration_cap());

// Exact small-instance mixed Nash search. Support profiles are enumerated in
// canonical order; for each, the indifference conditions of a polymatrix game
// are linear, so candidates come from one linear solve. Every candidate is
// verified before it is returned.
std::optional<ProductDistribution> mixed_nash_oracle(const RescaledGame& game, double eps_oracle,
                                                     std::uint64_t cap = enumeration_cap());

// Joint distribution satisfying every swap-deviation inequality, found by
// linear feasibility over the k^N simplex.
JointDistribution correlated_equilibrium_lp(const RescaledGame& game,
                                            std::uint64_t cap = enumeration_cap(),
                                            SolveOptions opts = {});

// Checks each swap-deviation inequality of a joint law directly.
double max_ce_regret(const RescaledGame& game, const JointDistribution& zeta);

struct LiftFeasibilityReport {
  FamilyViolations violations;
  double min_slack = 0;  // negative of the worst violation
  bool pass = false;
};

// Lifts Gamma to degree l and replays the full constraint system.
LiftFeasibilityReport verify_lift_feasibility(const RescaledGame& game,
                                              const ProductDistribution& gamma, int ell,
                                              double eps);

}  // namespace polynash
