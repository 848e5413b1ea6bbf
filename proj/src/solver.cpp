#include "polynash/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "polynash/kernels.hpp"

namespace polynash {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

namespace {

// One extrapolated simultaneous-projection pass over the affine rows.
void affine_pass(const std::vector<LinearConstraint>& rows, Eigen::VectorXd& x,
                 Eigen::VectorXd& delta, kernels::CorrectionWorkspace& ws, double relax) {
  const std::size_t active = kernels::accumulate_corrections(rows, x, delta, ws);
  if (active == 0) return;
  x += (relax / static_cast<double>(active)) * delta;
}

struct PsdContext {
  int dim = 0;
  const std::vector<std::size_t>* cell_var = nullptr;
  const std::vector<std::vector<std::size_t>>* var_cells = nullptr;
  Eigen::MatrixXd dykstra;  // matrix-space correction

  void reset() { dykstra = Eigen::MatrixXd::Zero(dim, dim); }

  // Assemble M(x) + correction, clip negative eigenvalues, write the clipped
  // matrix back by averaging duplicated cells per variable.
  bool step(Eigen::VectorXd& x) {
    Eigen::MatrixXd y(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        y(r, c) = x[static_cast<Eigen::Index>(
            (*cell_var)[static_cast<std::size_t>(r) * dim + c])];
    y += dykstra;
    y = 0.5 * (y + y.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y);
    if (es.info() != Eigen::Success) return false;
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd z = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    dykstra = y - z;
    for (std::size_t var = 0; var < var_cells->size(); ++var) {
      const auto& cells = (*var_cells)[var];
      if (cells.empty()) continue;
      double total = 0;
      for (std::size_t cell : cells)
        total += z(static_cast<Eigen::Index>(cell / dim), static_cast<Eigen::Index>(cell % dim));
      x[static_cast<Eigen::Index>(var)] = total / static_cast<double>(cells.size());
    }
    return true;
  }

  double min_eigenvalue(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        m(r, c) = x[static_cast<Eigen::Index>(
            (*cell_var)[static_cast<std::size_t>(r) * dim + c])];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

struct LoopResult {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  bool heuristic = false;
  double max_violation = 0;
};

// Shared projection loop. psd may be null. clamp bounds applied when finite.
LoopResult projection_loop(const std::vector<LinearConstraint>& rows, Eigen::VectorXd& x,
                           PsdContext* psd, double lo, double hi, const SolveOptions& opts) {
  kernels::CorrectionWorkspace ws;
  Eigen::VectorXd delta(x.size());
  if (psd) psd->reset();

  const bool clamp = std::isfinite(lo) || std::isfinite(hi);
  double best = std::numeric_limits<double>::infinity();
  double window_best = std::numeric_limits<double>::infinity();
  int checks_in_window = 0;
  LoopResult out;

  auto current_violation = [&]() {
    double v = kernels::max_row_violation(rows, x);
    if (psd) v = std::max(v, -psd->min_eigenvalue(x));
    return v;
  };

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    for (int pass = 0; pass < opts.affine_passes; ++pass)
      affine_pass(rows, x, delta, ws, opts.over_relax);
    if (clamp) x = x.cwiseMax(lo).cwiseMin(hi);
    if (psd && !psd->step(x)) {
      out.status = SolveStatus::NumericalFailure;
      out.iterations = iter;
      return out;
    }
    if (!x.allFinite()) {
      out.status = SolveStatus::NumericalFailure;
      out.iterations = iter;
      return out;
    }

    if (iter % opts.check_every == 0 || iter == opts.max_iterations) {
      const double viol = current_violation();
      out.iterations = iter;
      out.max_violation = viol;
      if (viol <= opts.tolerance) {
        out.status = SolveStatus::Feasible;
        return out;
      }
      best = std::min(best, viol);
      ++checks_in_window;
      if (checks_in_window >= opts.plateau_checks) {
        const bool stalled =
            window_best - best <= opts.plateau_rel_improvement * std::max(best, 1e-300);
        if (stalled && best > 10.0 * opts.tolerance) {
          out.status = SolveStatus::Infeasible;
          out.heuristic = true;
          return out;
        }
        window_best = best;
        checks_in_window = 0;
      }
      if (window_best == std::numeric_limits<double>::infinity()) window_best = best;
    }
  }
  out.status = SolveStatus::MaxIterations;
  out.iterations = opts.max_iterations;
  return out;
}

Eigen::VectorXd initial_point(const ConstraintSystem& sys, const SolveOptions& opts) {
  const MonomialBasis& basis = *sys.basis;
  const auto uniform = lift_product(
      ProductDistribution::uniform(basis.num_players(), basis.num_actions()), basis.degree());
  Eigen::VectorXd x = uniform.values();
  switch (opts.init) {
    case SolveOptions::Init::UniformLift:
      break;
    case SolveOptions::Init::Warm:
      if (x.size() != opts.warm_start.size())
        throw Error("solver: warm start has wrong dimension");
      x = opts.warm_start;
      break;
    case SolveOptions::Init::Seeded: {
      std::mt19937_64 rng(opts.seed);
      for (Eigen::Index i = 1; i < x.size(); ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x[i] += opts.perturbation * (2.0 * u - 1.0);
      }
      break;
    }
  }
  return x;
}

}  // namespace

SolveOutcome solve_feasible(const ConstraintSystem& sys, const SolveOptions& opts) {
  if (opts.tolerance <= 0) throw Error("solver: tolerance must be positive");
  if (!sys.basis) throw Error("solver: system has no basis");
  const auto t0 = std::chrono::steady_clock::now();

  Eigen::VectorXd x = initial_point(sys, opts);
  PsdContext psd;
  PsdContext* psd_ptr = nullptr;
  if (sys.has_psd()) {
    psd.dim = sys.moment_dim;
    psd.cell_var = &sys.moment_var;
    psd.var_cells = &sys.var_cells;
    psd_ptr = &psd;
  }

  const double inf = std::numeric_limits<double>::infinity();
  LoopResult loop = projection_loop(sys.constraints, x, psd_ptr, -inf, inf, opts);

  SolveOutcome out;
  out.status = loop.status;
  out.iterations = loop.iterations;
  out.infeasibility_heuristic = loop.heuristic;
  if (x.allFinite()) out.violations = system_violations(sys, x);
  if (loop.status == SolveStatus::Feasible) {
    // The outcome only counts as feasible if the exact per-family residuals
    // agree with the loop's verdict.
    if (out.violations.max_violation() <= opts.tolerance)
      out.point = Pseudoexpectation(sys.basis, x);
    else
      out.status = SolveStatus::MaxIterations;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

LinearOutcome solve_linear_feasible(const LinearFeasibility& problem, const SolveOptions& opts,
                                    const Eigen::VectorXd* start) {
  Eigen::VectorXd x = start ? *start
                            : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.num_vars));
  if (static_cast<std::size_t>(x.size()) != problem.num_vars)
    throw Error("solve_linear_feasible: bad start dimension");
  LoopResult loop = projection_loop(problem.rows, x, nullptr, problem.lower, problem.upper, opts);
  LinearOutcome out;
  out.status = loop.status;
  out.iterations = loop.iterations;
  out.x = std::move(x);
  out.max_violation = kernels::max_row_violation(problem.rows, out.x);
  return out;
}

}  // namespace polynash
