#pragma once

#include <cstdint>
#include <vector>

#include "polynash/graph.hpp"
#include "polynash/pseudoexpectation.hpp"

namespace polynash {

struct RoundingStep {
  int player = -1;
  int action = -1;
  double marginal_used = 0;  // probability of the sampled action when drawn
  double delta_after = 0;
  double avg_mi_after = 0;
};

struct RoundingTrace {
  std::vector<RoundingStep> steps;
  double final_delta = 0;
  int rounds = 0;
  bool converged = false;  // reached the target before the budget ran out
};

struct RoundingResult {
  Pseudoexpectation pe;
  RoundingTrace trace;
};

// Random conditioning rounding: repeatedly pick a uniformly random
// unconditioned player, sample an action from its current marginal and
// condition, until the average local correlation reaches the target or the
// budget is exhausted. Returns the best iterate seen.
RoundingResult conditioning_round_random(const Pseudoexpectation& pe, const Graph& g,
                                         double target_delta, int max_rounds,
                                         std::uint64_t seed);

// Exhaustive variant: enumerates all conditioning sets up to the given depth
// (players and actions, skipping null events) and returns the minimizer.
RoundingResult conditioning_round_exhaustive(const Pseudoexpectation& pe, const Graph& g,
                                             double target_delta, int depth,
                                             std::uint64_t cap = enumeration_cap());

struct MiCurve {
  std::vector<double> mean;       // index t: mean pairwise conditional MI after t rounds
  std::vector<double> std_error;  // Monte-Carlo standard error per entry
};

// Monte-Carlo average of the mean pairwise conditional mutual information
// after t = 0..rounds random conditionings.
MiCurve avg_conditional_mi_curve(const Pseudoexpectation& pe, const Graph& g, int rounds,
                                 int trials, std::uint64_t seed);

}  // namespace polynash
