#include "polynash/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polynash {

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Samples an action from player i's current marginal, restricted to the
// support above the probability floor.
int sample_action(const Pseudoexpectation& pe, int i, std::mt19937_64& rng, double* prob_used) {
  const int k = pe.num_actions();
  std::vector<double> probs(k, 0.0);
  double total = 0;
  for (int p = 0; p < k; ++p) {
    const double v = pe.value({pe.basis().var_id(i, p)});
    if (v > kProbFloor) probs[p] = v;
    total += probs[p];
  }
  if (total <= 0) throw ConditioningOnNullEvent("rounding: player has no sampleable action");
  double u = uniform01(rng) * total;
  for (int p = 0; p < k; ++p) {
    u -= probs[p];
    if (u <= 0 || p == k - 1) {
      // Last action with positive mass wins when rounding error leaks past.
      int chosen = p;
      while (probs[chosen] == 0.0 && chosen > 0) --chosen;
      if (prob_used) *prob_used = probs[chosen] / total;
      return chosen;
    }
  }
  throw Error("rounding: unreachable");
}

}  // namespace

RoundingResult conditioning_round_random(const Pseudoexpectation& pe, const Graph& g,
                                         double target_delta, int max_rounds,
                                         std::uint64_t seed) {
  if (pe.degree() < max_rounds + 2)
    throw Error("conditioning_round_random: degree too small for the round budget");

  std::mt19937_64 rng(seed);
  RoundingResult best{pe, {}};
  best.trace.final_delta = pe.average_local_correlation(g);
  double best_delta = best.trace.final_delta;

  Pseudoexpectation cur = pe;
  RoundingTrace trace;
  trace.final_delta = best_delta;
  if (best_delta <= target_delta) {
    trace.converged = true;
    best.trace = trace;
    return best;
  }

  std::vector<int> unconditioned(pe.num_players());
  for (int i = 0; i < pe.num_players(); ++i) unconditioned[i] = i;

  for (int round = 0; round < max_rounds && !unconditioned.empty(); ++round) {
    const std::size_t pick =
        std::min<std::size_t>(static_cast<std::size_t>(uniform01(rng) * unconditioned.size()),
                              unconditioned.size() - 1);
    const int player = unconditioned[pick];
    unconditioned.erase(unconditioned.begin() + static_cast<std::ptrdiff_t>(pick));

    RoundingStep step;
    step.player = player;
    step.action = sample_action(cur, player, rng, &step.marginal_used);
    cur = cur.condition(player, step.action);
    step.delta_after = cur.average_local_correlation(g);
    step.avg_mi_after = cur.global_mi_mean();
    trace.steps.push_back(step);
    trace.rounds = static_cast<int>(trace.steps.size());
    trace.final_delta = step.delta_after;

    if (step.delta_after < best_delta) {
      best_delta = step.delta_after;
      best.pe = cur;
      best.trace = trace;
    }
    if (step.delta_after <= target_delta) {
      trace.converged = true;
      best.pe = cur;
      best.trace = trace;
      return best;
    }
  }
  best.trace.converged = best_delta <= target_delta;
  return best;
}

RoundingResult conditioning_round_exhaustive(const Pseudoexpectation& pe, const Graph& g,
                                             double target_delta, int depth,
                                             std::uint64_t cap) {
  if (depth < 0) throw Error("conditioning_round_exhaustive: negative depth");
  if (pe.degree() < depth + 2)
    throw Error("conditioning_round_exhaustive: degree too small for the depth");
  const int n = pe.num_players(), k = pe.num_actions();
  // (Nk)^depth sequences bound the work; refuse oversized requests up front.
  std::uint64_t work = 1;
  for (int t = 0; t < depth; ++t) {
    work *= static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k);
    if (work > cap) throw Error("conditioning_round_exhaustive: enumeration exceeds cap");
  }

  RoundingResult best{pe, {}};
  best.trace.final_delta = pe.average_local_correlation(g);
  best.trace.converged = best.trace.final_delta <= target_delta;
  if (best.trace.converged || depth == 0) return best;

  // Depth-first over conditioning sets: players strictly increasing
  // (conditioning commutes), actions in canonical order, null events skipped.
  struct Frame {
    Pseudoexpectation pe;
    RoundingTrace trace;
  };
  bool done = false;
  auto consider = [&](const Pseudoexpectation& cand, RoundingTrace trace) {
    trace.final_delta = cand.average_local_correlation(g);
    trace.rounds = static_cast<int>(trace.steps.size());
    if (!trace.steps.empty()) trace.steps.back().delta_after = trace.final_delta;
    if (trace.final_delta < best.trace.final_delta) {
      best.pe = cand;
      best.trace = trace;
    }
    if (trace.final_delta <= target_delta) {
      best.pe = cand;
      best.trace = trace;
      best.trace.converged = true;
      done = true;
    }
  };

  auto recurse = [&](auto&& self, const Frame& frame, int first_player) -> void {
    if (done || static_cast<int>(frame.trace.steps.size()) >= depth) return;
    for (int i = first_player; i < n && !done; ++i) {
      for (int p = 0; p < k && !done; ++p) {
        const double prob = frame.pe.value({frame.pe.basis().var_id(i, p)});
        if (prob <= kProbFloor) continue;  // null event
        Frame next{frame.pe.condition(i, p), frame.trace};
        RoundingStep step;
        step.player = i;
        step.action = p;
        step.marginal_used = prob;
        next.trace.steps.push_back(step);
        consider(next.pe, next.trace);
        if (!done) self(self, next, i + 1);
      }
    }
  };
  Frame root{pe, {}};
  recurse(recurse, root, 0);
  best.trace.rounds = static_cast<int>(best.trace.steps.size());
  return best;
}

MiCurve avg_conditional_mi_curve(const Pseudoexpectation& pe, const Graph& g, int rounds,
                                 int trials, std::uint64_t seed) {
  if (rounds < 0 || trials < 1) throw Error("avg_conditional_mi_curve: bad arguments");
  if (pe.degree() < rounds + 2)
    throw Error("avg_conditional_mi_curve: degree too small for the round budget");

  std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(trials));
  // Trials are independent; each derives its own RNG stream, so results do
  // not depend on the execution order.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(mix_seed(seed + static_cast<std::uint64_t>(trial)));
    std::vector<double> curve;
    curve.reserve(static_cast<std::size_t>(rounds) + 1);
    Pseudoexpectation cur = pe;
    curve.push_back(cur.global_mi_mean());
    std::vector<int> unconditioned(pe.num_players());
    for (int i = 0; i < pe.num_players(); ++i) unconditioned[i] = i;
    for (int t = 1; t <= rounds; ++t) {
      if (!unconditioned.empty()) {
        const std::size_t pick = std::min<std::size_t>(
            static_cast<std::size_t>(uniform01(rng) * unconditioned.size()),
            unconditioned.size() - 1);
        const int player = unconditioned[pick];
        unconditioned.erase(unconditioned.begin() + static_cast<std::ptrdiff_t>(pick));
        const int action = sample_action(cur, player, rng, nullptr);
        cur = cur.condition(player, action);
      }
      curve.push_back(cur.global_mi_mean());
    }
    per_trial[static_cast<std::size_t>(trial)] = std::move(curve);
  }

  MiCurve out;
  out.mean.assign(static_cast<std::size_t>(rounds) + 1, 0.0);
  out.std_error.assign(static_cast<std::size_t>(rounds) + 1, 0.0);
  for (int t = 0; t <= rounds; ++t) {
    double mean = 0;
    for (const auto& c : per_trial) mean += c[static_cast<std::size_t>(t)];
    mean /= trials;
    double var = 0;
    for (const auto& c : per_trial) {
      const double d = c[static_cast<std::size_t>(t)] - mean;
      var += d * d;
    }
    var = trials > 1 ? var / (trials - 1) : 0.0;
    out.mean[static_cast<std::size_t>(t)] = mean;
    out.std_error[static_cast<std::size_t>(t)] = std::sqrt(var / trials);
  }
  return out;
}

}  // namespace polynash
