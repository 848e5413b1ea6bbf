#pragma once

#include <Eigen/Dense>

#include "polynash/pseudoexpectation.hpp"

namespace polynash {

// Degree-n polynomial upper envelope of |x| on [-1,1]:
//   |x| <= f(x) <= |x| + envelope   (measured on a 10^5-point grid).
// Built from a truncated Chebyshev series of |x| plus a vertical shift.
// Evaluation goes through the Chebyshev form (stable); the monomial
// coefficients alpha_0..alpha_n back the nuclear-norm bound.
struct AbsApproxPoly {
  int degree = 0;
  Eigen::VectorXd cheb;   // Chebyshev coefficients of f (after shift)
  Eigen::VectorXd alpha;  // monomial coefficients of f, index r = power
  double shift = 0;
  double sup_error = 0;   // measured max |g(x) - |x|| before the shift
  double envelope = 0;    // eps': measured max f(x) - |x|
  double coeff_constant = 0;        // measured max_r |alpha_r| r^{3/2}, r >= 1
  bool decay_bound_holds = false;   // coeff_constant <= 18/sqrt(pi)

  double eval(double x) const;           // Clenshaw
  double alpha_abs_sum() const;          // sum_{r>=0} |alpha_r|
};

AbsApproxPoly build_abs_approx(int n);

// Sum of singular values; symmetric inputs use an eigendecomposition.
double nuclear_norm(const Eigen::MatrixXd& m);

// Pseudo-covariance matrix Q over row/column index (i,p):
// Q[(i,p),(j,q)] = pE[a_ip a_jq] - pE[a_ip] pE[a_jq].
Eigen::MatrixXd covariance_matrix(const Pseudoexpectation& pe);

// H[(i,p),(j,q)] = f(cov(a_ip, a_jq)); symmetric Nk x Nk.
Eigen::MatrixXd build_H(const Pseudoexpectation& pe, const AbsApproxPoly& poly);
namespace serial_ref {
Eigen::MatrixXd build_H(const Pseudoexpectation& pe, const AbsApproxPoly& poly);
}

struct NuclearBoundReport {
  double lhs = 0;  // ||H||_*
  double rhs = 0;  // Nk * sum_r |alpha_r|
  bool holds = false;
};
NuclearBoundReport check_nuclear_bound(const Pseudoexpectation& pe, const AbsApproxPoly& poly);

struct HadamardPsdReport {
  double min_eigenvalue = 0;
  bool holds = false;
};
// Entrywise r-th power of a PSD matrix stays PSD.
HadamardPsdReport hadamard_power_psd_check(const Eigen::MatrixXd& q, int r);

struct LocalGlobalReport {
  double lhs = 0;  // average local correlation
  double rhs = 0;
  double nuclear_term = 0;
  double mi_mean = 0;
  bool holds = false;
};
// Local correlation against the spectral bound
//   Delta <= (rho k / N) ||H||_* + tau sqrt(2 (eps' k^2)^2 + 2 * mean MI).
LocalGlobalReport check_local_global_bound(const Pseudoexpectation& pe, const Graph& g,
                                           const SpectralSummary& spectral,
                                           const AbsApproxPoly& poly);

}  // namespace polynash
