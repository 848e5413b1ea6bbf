#pragma once

#include <cstdint>
#include <string>

#include "polynash/brp.hpp"
#include "polynash/game.hpp"
#include "polynash/graph.hpp"
#include "polynash/rounding.hpp"
#include "polynash/solver.hpp"

namespace polynash {

// Everything a run needs, serializable into the summary for reproducibility.
struct ExperimentConfig {
  int n = 8;
  int k = 2;
  double p = -1;  // edge probability; resolved from d when negative
  double d = -1;  // target average degree
  std::string model = "uniform";  // uniform | coordination | anticoordination | fromfile
  std::string game_file;
  double l_target = 1.0;  // recorded with the run
  double eps = 0.1;
  int ell = 2;
  std::uint64_t seed = 1;
  std::string out_dir;
  int trials = 4;
  int rounds = -1;          // conditioning budget; default ell - 2
  double target_delta = -1; // default eps^2 / L^2
  double smallset_cutoff = -1;
  bool include_conditioned = true;
  double tol = 1e-7;
  double eps_eff = -1;      // default 120 * L * eps
  int max_iterations = 40000;
  bool inject_contradiction = false;  // debug: add an unsatisfiable pair

  double resolved_p() const;
};

// Exit codes of the pipeline stages.
enum PipelineExit {
  kExitOk = 0,
  kExitSolver = 2,
  kExitRounding = 3,
  kExitPursuit = 4,
  kExitVerification = 5,
};

struct GeneratedInstance {
  PolymatrixGame game;
  Graph graph;
  RescaledGame rescaled;
};

GeneratedInstance generate_instance(const ExperimentConfig& cfg);

struct PipelineResult {
  int exit_code = kExitOk;
  std::string status = "ok";
  SolveOutcome solve;
  double delta_before = 0;
  double delta_after = 0;
  int rounds_used = 0;
  bool rounding_converged = false;
  PursuitResult pursuit;
  NashReport verification;
  double eps_eff = 0;
  double measured_c = 0;  // max_phi / (L * eps)
  double welfare = 0;
  double smoothness_l = 0;
  std::string summary_json;   // byte-stable given identical config
  std::string timings_json;   // wall-clock sidecar, excluded from determinism
  RoundingTrace rounding_trace;
};

// generate -> constraints -> solve -> condition -> pursue -> verify.
// When out_dir is set, writes game/graph files, traces, the solver report,
// summary.json and timings.json into it.
PipelineResult run_pipeline(const ExperimentConfig& cfg);

std::string config_to_json_fragment(const ExperimentConfig& cfg);

}  // namespace polynash
