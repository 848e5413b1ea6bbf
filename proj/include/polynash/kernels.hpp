#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polynash {
struct LinearConstraint;
struct Graph;
class Pseudoexpectation;
}  // namespace polynash

namespace polynash::kernels {

// Parallel reductions used on the hot paths. Sums are accumulated over
// fixed-size chunks whose partials are combined in chunk order, so results
// depend only on the problem size, never on the thread count.
inline constexpr std::size_t kSumChunk = 2048;

// Fixed number of accumulator buffers for sparse-correction accumulation.
inline constexpr int kAccumChunks = 64;

template <class F>
double parallel_sum(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kSumChunk;
    const std::size_t hi = std::min(lo + kSumChunk, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

// Max reduction; order-insensitive, so a plain parallel max is exact.
template <class F>
double parallel_max(std::size_t n, F&& f, double init) {
  double best = init;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const double v = f(static_cast<std::size_t>(i));
    if (v > best) best = v;
  }
  return best;
}

// Reusable buffers for accumulate_corrections.
struct CorrectionWorkspace {
  std::vector<Eigen::VectorXd> buffer;       // kAccumChunks dense accumulators
  std::vector<std::size_t> active_in_chunk;  // per-chunk active counts
};

// Sum of per-constraint projection corrections over the violated rows.
// delta is overwritten; returns the number of active rows. Rows are split
// into kAccumChunks contiguous blocks accumulated independently and combined
// in block order.
std::size_t accumulate_corrections(const std::vector<LinearConstraint>& rows,
                                   const Eigen::VectorXd& x, Eigen::VectorXd& delta,
                                   CorrectionWorkspace& ws);

// Largest violation over a row range.
double max_row_violation(const std::vector<LinearConstraint>& rows, const Eigen::VectorXd& x);

// Local correlation Delta(i) for every node.
Eigen::VectorXd local_correlation_profile(const Pseudoexpectation& pe, const Graph& g);

// Serial reference implementations, kept for testing and benchmarking.
namespace serial {

template <class F>
double sum(std::size_t n, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(i);
  return s;
}

template <class F>
double max(std::size_t n, F&& f, double init) {
  double best = init;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(i);
    if (v > best) best = v;
  }
  return best;
}

std::size_t accumulate_corrections(const std::vector<LinearConstraint>& rows,
                                   const Eigen::VectorXd& x, Eigen::VectorXd& delta);
double max_row_violation(const std::vector<LinearConstraint>& rows, const Eigen::VectorXd& x);
Eigen::VectorXd local_correlation_profile(const Pseudoexpectation& pe, const Graph& g);

}  // namespace serial

int thread_count();

}  // namespace polynash::kernels
