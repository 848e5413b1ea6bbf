#pragma once

#include <Eigen/Dense>
#include <memory>
#include <utility>
#include <vector>

#include "polynash/game.hpp"
#include "polynash/graph.hpp"
#include "polynash/monomial.hpp"

namespace polynash {

// A degree-l multilinear moment table over action indicators. Immutable;
// conditioning returns a new instance of degree l-1.
class Pseudoexpectation {
 public:
  Pseudoexpectation(std::shared_ptr<const MonomialBasis> basis, Eigen::VectorXd values);

  int num_players() const { return basis_->num_players(); }
  int num_actions() const { return basis_->num_actions(); }
  int degree() const { return basis_->degree(); }
  const MonomialBasis& basis() const { return *basis_; }
  std::shared_ptr<const MonomialBasis> basis_ptr() const { return basis_; }
  const Eigen::VectorXd& values() const { return values_; }

  double operator[](std::size_t idx) const { return values_[static_cast<Eigen::Index>(idx)]; }
  double value(const Monomial& m) const;  // throws on oversize monomials

  // Linear-functional evaluation of a multilinear polynomial given as
  // (coefficient, monomial) terms.
  double evaluate(const std::vector<std::pair<double, Monomial>>& poly) const;

  // Bayes-style update on the event a_{ip} = 1; degree drops by one.
  Pseudoexpectation condition(int player, int action) const;

  // Singleton moments as a product distribution; rows renormalized when the
  // drift exceeds tolerance (max drift reported through the out-param).
  ProductDistribution marginals(double* max_drift = nullptr) const;

  // k x k joint table of the pair (i, j), entries clipped to [0,1]. Row and
  // column sums are checked against the singleton marginals.
  Eigen::MatrixXd pairwise_marginal(int i, int j) const;

  // Local correlation at node i: neighbor-averaged total covariance mass.
  double local_correlation(const Graph& g, int i) const;
  double average_local_correlation(const Graph& g) const;

  // Covariance block sum_{p,q} |cov(a_ip, a_jq)| for one ordered pair.
  double covariance_block(int i, int j) const;

  // Mutual information of the pairwise law in nats; nonnegative.
  double mutual_information(int i, int j) const;
  // Entropy of i's marginal in nats.
  double marginal_entropy(int i) const;
  // (1/N^2) sum over ordered pairs of I(a_i, a_j), with the diagonal taken
  // as the marginal entropy.
  double global_mi_mean() const;

  // Moment matrix over monomials of size <= floor(degree/2).
  Eigen::MatrixXd moment_matrix() const;

  struct Validity {
    double min_moment_eigenvalue = 0;
    double max_coloring_gap = 0;
    double min_value = 0;
    double max_value = 0;
    bool ok = false;
  };
  // Normalization, value range, coloring consistency and moment-matrix PSD.
  Validity check_validity(double psd_tol = 1e-7, double value_tol = 1e-7) const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  Eigen::VectorXd values_;
};

// Independent-product lift of Gamma to a degree-l moment table.
Pseudoexpectation lift_product(const ProductDistribution& gamma, int degree,
                               std::uint64_t cap = enumeration_cap());

}  // namespace polynash
