#include "polynash/kernels.hpp"

#include "polynash/constraints.hpp"
#include "polynash/graph.hpp"
#include "polynash/pseudoexpectation.hpp"

namespace polynash::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// Projection correction of one row at x: for equalities the full projection
// step, for inequalities only when violated.
inline double row_step(const LinearConstraint& c, const Eigen::VectorXd& x) {
  if (c.norm_sq == 0) return 0.0;
  double r = -c.rhs;
  for (const auto& [idx, coeff] : c.terms) r += coeff * x[static_cast<Eigen::Index>(idx)];
  if (!c.equality && r >= 0) return 0.0;
  if (c.equality && r == 0) return 0.0;
  return -r / c.norm_sq;
}

}  // namespace

std::size_t accumulate_corrections(const std::vector<LinearConstraint>& rows,
                                   const Eigen::VectorXd& x, Eigen::VectorXd& delta,
                                   CorrectionWorkspace& ws) {
  const std::size_t m = rows.size();
  const Eigen::Index dim = x.size();
  if (ws.buffer.size() != static_cast<std::size_t>(kAccumChunks)) {
    ws.buffer.assign(kAccumChunks, Eigen::VectorXd::Zero(dim));
    ws.active_in_chunk.assign(kAccumChunks, 0);
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < kAccumChunks; ++c) {
    const std::size_t lo = m * static_cast<std::size_t>(c) / kAccumChunks;
    const std::size_t hi = m * (static_cast<std::size_t>(c) + 1) / kAccumChunks;
    Eigen::VectorXd& buf = ws.buffer[static_cast<std::size_t>(c)];
    if (buf.size() != dim) buf = Eigen::VectorXd::Zero(dim);
    buf.setZero();
    std::size_t active = 0;
    for (std::size_t r = lo; r < hi; ++r) {
      const double step = row_step(rows[r], x);
      if (step == 0.0) continue;
      ++active;
      for (const auto& [idx, coeff] : rows[r].terms)
        buf[static_cast<Eigen::Index>(idx)] += step * coeff;
    }
    ws.active_in_chunk[static_cast<std::size_t>(c)] = active;
  }
  delta.setZero();
  std::size_t total_active = 0;
  for (int c = 0; c < kAccumChunks; ++c) {
    delta += ws.buffer[static_cast<std::size_t>(c)];
    total_active += ws.active_in_chunk[static_cast<std::size_t>(c)];
  }
  return total_active;
}

double max_row_violation(const std::vector<LinearConstraint>& rows, const Eigen::VectorXd& x) {
  return parallel_max(
      rows.size(), [&](std::size_t r) { return rows[r].violation(x.data()); }, 0.0);
}

Eigen::VectorXd local_correlation_profile(const Pseudoexpectation& pe, const Graph& g) {
  Eigen::VectorXd out(g.num_nodes);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int i = 0; i < g.num_nodes; ++i) out(i) = pe.local_correlation(g, i);
  return out;
}

namespace serial {

std::size_t accumulate_corrections(const std::vector<LinearConstraint>& rows,
                                   const Eigen::VectorXd& x, Eigen::VectorXd& delta) {
  delta.setZero();
  std::size_t active = 0;
  for (const auto& row : rows) {
    const double step = row_step(row, x);
    if (step == 0.0) continue;
    ++active;
    for (const auto& [idx, coeff] : row.terms)
      delta[static_cast<Eigen::Index>(idx)] += step * coeff;
  }
  return active;
}

double max_row_violation(const std::vector<LinearConstraint>& rows, const Eigen::VectorXd& x) {
  return max(
      rows.size(), [&](std::size_t r) { return rows[r].violation(x.data()); }, 0.0);
}

Eigen::VectorXd local_correlation_profile(const Pseudoexpectation& pe, const Graph& g) {
  Eigen::VectorXd out(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) out(i) = pe.local_correlation(g, i);
  return out;
}

}  // namespace serial

}  // namespace polynash::kernels
