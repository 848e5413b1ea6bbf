#pragma once

#include <optional>
#include <string>

#include "polynash/constraints.hpp"

namespace polynash {

enum class SolveStatus { Feasible, Infeasible, MaxIterations, NumericalFailure };

std::string status_name(SolveStatus s);

struct SolveOptions {
  double tolerance = 1e-7;  // max allowed constraint violation
  int max_iterations = 40000;
  std::string method = "projection";
  std::uint64_t seed = 0;

  enum class Init { UniformLift, Seeded, Warm };
  Init init = Init::UniformLift;
  Eigen::VectorXd warm_start;      // used when init == Warm
  double perturbation = 0.01;      // seeded start: noise scale around the uniform lift

  double over_relax = 1.7;         // in (0, 2)
  int affine_passes = 4;           // correction sweeps between PSD steps
  int check_every = 20;            // iterations between full violation checks
  int plateau_checks = 120;        // heuristic infeasibility window, in checks
  double plateau_rel_improvement = 1e-3;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::optional<Pseudoexpectation> point;  // present when Feasible
  FamilyViolations violations;             // at the returned/last iterate
  int iterations = 0;
  double seconds = 0;
  bool infeasibility_heuristic = false;    // projection methods lack certificates
};

// Convex feasibility solve by simultaneous projections onto the affine
// families interleaved with a PSD step on the assembled moment matrix
// (eigenvalue clipping with a Dykstra-style correction). Deterministic for
// fixed inputs and options.
SolveOutcome solve_feasible(const ConstraintSystem& sys, const SolveOptions& opts);

// Plain linear feasibility over box-constrained variables; same projection
// machinery without the PSD step. Used for joint-distribution programs.
struct LinearFeasibility {
  std::size_t num_vars = 0;
  std::vector<LinearConstraint> rows;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct LinearOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  double max_violation = 0;
  int iterations = 0;
};

LinearOutcome solve_linear_feasible(const LinearFeasibility& problem, const SolveOptions& opts,
                                    const Eigen::VectorXd* start = nullptr);

}  // namespace polynash
