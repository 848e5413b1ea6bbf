#include "polynash/polyapprox.hpp"

#include <algorithm>
#include <cmath>

#include "polynash/kernels.hpp"

namespace polynash {

namespace {

constexpr int kGridPoints = 100000;
const double kPaperDecayConstant = 18.0 / std::sqrt(M_PI);

double clenshaw(const Eigen::VectorXd& c, double x) {
  double b1 = 0, b2 = 0;
  for (Eigen::Index j = c.size() - 1; j >= 1; --j) {
    const double t = 2.0 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = t;
  }
  return x * b1 - b2 + c[0];
}

// Monomial coefficients of sum_j c_j T_j via the T recurrence.
Eigen::VectorXd cheb_to_monomial(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd tprev = Eigen::VectorXd::Zero(n);  // T_{j-1}
  Eigen::VectorXd tcur = Eigen::VectorXd::Zero(n);   // T_j
  tprev[0] = 1.0;
  alpha[0] += c[0];
  if (n > 1) {
    tcur[1] = 1.0;
    alpha += c[1] * tcur;
  }
  for (Eigen::Index j = 2; j < n; ++j) {
    Eigen::VectorXd tnext = Eigen::VectorXd::Zero(n);
    tnext.segment(1, n - 1) = 2.0 * tcur.segment(0, n - 1);
    tnext -= tprev;
    alpha += c[j] * tnext;
    tprev = std::move(tcur);
    tcur = std::move(tnext);
  }
  return alpha;
}

}  // namespace

double AbsApproxPoly::eval(double x) const { return clenshaw(cheb, x); }

double AbsApproxPoly::alpha_abs_sum() const { return alpha.array().abs().sum(); }

AbsApproxPoly build_abs_approx(int n) {
  if (n < 1) throw Error("build_abs_approx: degree must be positive");
  AbsApproxPoly poly;
  poly.degree = n;

  // Chebyshev series of |x| on [-1,1]: only even terms.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[0] = 2.0 / M_PI;
  for (int m = 1; 2 * m <= n; ++m)
    c[2 * m] = (m % 2 == 1 ? 1.0 : -1.0) * 4.0 / (M_PI * (4.0 * m * m - 1.0));

  double sup = 0, overshoot = 0;
  for (int t = 0; t < kGridPoints; ++t) {
    const double x = -1.0 + 2.0 * t / (kGridPoints - 1);
    const double diff = clenshaw(c, x) - std::abs(x);
    sup = std::max(sup, std::abs(diff));
    overshoot = std::max(overshoot, diff);
  }
  poly.sup_error = sup;
  poly.shift = sup;
  poly.envelope = sup + overshoot;

  c[0] += poly.shift;
  poly.cheb = c;
  poly.alpha = cheb_to_monomial(c);

  poly.coeff_constant = 0;
  for (int r = 1; r <= n; ++r)
    poly.coeff_constant =
        std::max(poly.coeff_constant, std::abs(poly.alpha[r]) * std::pow(r, 1.5));
  poly.decay_bound_holds = poly.coeff_constant <= kPaperDecayConstant;
  return poly;
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw Error("nuclear_norm: non-finite entries");
  if (m.rows() == m.cols()) {
    const double scale = std::max(1.0, m.array().abs().maxCoeff());
    if ((m - m.transpose()).array().abs().maxCoeff() <= 1e-12 * scale) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues().array().abs().sum();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

Eigen::MatrixXd covariance_matrix(const Pseudoexpectation& pe) {
  const int n = pe.num_players(), k = pe.num_actions();
  const int dim = n * k;
  Eigen::VectorXd mu(dim);
  for (int v = 0; v < dim; ++v) mu[v] = pe.value({v});
  Eigen::MatrixXd q(dim, dim);
  for (int a = 0; a < dim; ++a) {
    q(a, a) = mu[a] - mu[a] * mu[a];
    for (int b = a + 1; b < dim; ++b) {
      const double joint = pe.value({a, b});
      const double cov = joint - mu[a] * mu[b];
      q(a, b) = cov;
      q(b, a) = cov;
    }
  }
  return q;
}

Eigen::MatrixXd build_H(const Pseudoexpectation& pe, const AbsApproxPoly& poly) {
  if (pe.degree() < 2) throw Error("build_H: degree below 2");
  const Eigen::MatrixXd q = covariance_matrix(pe);
  Eigen::MatrixXd h(q.rows(), q.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (Eigen::Index a = 0; a < q.rows(); ++a)
    for (Eigen::Index b = 0; b < q.cols(); ++b) h(a, b) = poly.eval(q(a, b));
  return h;
}

namespace serial_ref {
Eigen::MatrixXd build_H(const Pseudoexpectation& pe, const AbsApproxPoly& poly) {
  const Eigen::MatrixXd q = covariance_matrix(pe);
  Eigen::MatrixXd h(q.rows(), q.cols());
  for (Eigen::Index a = 0; a < q.rows(); ++a)
    for (Eigen::Index b = 0; b < q.cols(); ++b) h(a, b) = poly.eval(q(a, b));
  return h;
}
}  // namespace serial_ref

NuclearBoundReport check_nuclear_bound(const Pseudoexpectation& pe, const AbsApproxPoly& poly) {
  NuclearBoundReport r;
  r.lhs = nuclear_norm(build_H(pe, poly));
  r.rhs = static_cast<double>(pe.num_players()) * pe.num_actions() * poly.alpha_abs_sum();
  r.holds = r.lhs <= r.rhs + 1e-6;
  return r;
}

HadamardPsdReport hadamard_power_psd_check(const Eigen::MatrixXd& q, int r) {
  if (r < 0) throw Error("hadamard_power_psd_check: negative power");
  if (q.rows() != q.cols()) throw Error("hadamard_power_psd_check: not square");
  const double scale = std::max(1.0, q.array().abs().maxCoeff());
  if ((q - q.transpose()).array().abs().maxCoeff() > 1e-9 * scale)
    throw Error("hadamard_power_psd_check: input not symmetric");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-6)
      throw Error("hadamard_power_psd_check: input not PSD");
  }
  Eigen::MatrixXd power = Eigen::MatrixXd::Ones(q.rows(), q.cols());
  for (int t = 0; t < r; ++t) power = power.cwiseProduct(q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(power, Eigen::EigenvaluesOnly);
  HadamardPsdReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.holds = rep.min_eigenvalue >= -1e-6;
  return rep;
}

LocalGlobalReport check_local_global_bound(const Pseudoexpectation& pe, const Graph& g,
                                           const SpectralSummary& spectral,
                                           const AbsApproxPoly& poly) {
  LocalGlobalReport rep;
  const double n = pe.num_players();
  const double k = pe.num_actions();
  rep.lhs = pe.average_local_correlation(g);
  rep.nuclear_term = nuclear_norm(build_H(pe, poly));
  rep.mi_mean = pe.global_mi_mean();
  const double epsk2 = poly.envelope * k * k;
  rep.rhs = spectral.rho * k / n * rep.nuclear_term +
            spectral.tau * std::sqrt(2.0 * epsk2 * epsk2 + 2.0 * rep.mi_mean);
  rep.holds = rep.lhs <= rep.rhs + 1e-6;
  return rep;
}

}  // namespace polynash
