#include "polynash/pseudoexpectation.hpp"

#include <algorithm>
#include <cmath>

#include "polynash/kernels.hpp"

namespace polynash {

Pseudoexpectation::Pseudoexpectation(std::shared_ptr<const MonomialBasis> basis,
                                     Eigen::VectorXd values)
    : basis_(std::move(basis)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != basis_->size())
    throw Error("pseudoexpectation: value vector does not match basis");
}

double Pseudoexpectation::value(const Monomial& m) const {
  const auto idx = basis_->find(m);
  if (idx < 0) throw Error("pseudoexpectation: monomial exceeds degree");
  return values_[idx];
}

double Pseudoexpectation::evaluate(const std::vector<std::pair<double, Monomial>>& poly) const {
  double total = 0;
  for (const auto& [coeff, m] : poly) total += coeff * value(m);
  return total;
}

Pseudoexpectation Pseudoexpectation::condition(int player, int action) const {
  if (degree() < 1) throw Error("condition: degree exhausted");
  const int var = basis_->var_id(player, action);
  const double p = value({var});
  if (p <= kProbFloor)
    throw ConditioningOnNullEvent("condition: marginal " + std::to_string(p) +
                                  " at or below probability floor");
  auto nb = MonomialBasis::get(num_players(), num_actions(), degree() - 1);
  Eigen::VectorXd vals(nb->size());
  for (std::size_t idx = 0; idx < nb->size(); ++idx) {
    const Monomial& s = nb->monomial(idx);
    vals[static_cast<Eigen::Index>(idx)] = value(monomial_union(s, var)) / p;
  }
  return Pseudoexpectation(std::move(nb), std::move(vals));
}

ProductDistribution Pseudoexpectation::marginals(double* max_drift) const {
  const int n = num_players(), k = num_actions();
  ProductDistribution g;
  g.mu = Eigen::MatrixXd::Zero(n, k);
  double drift = 0;
  for (int i = 0; i < n; ++i) {
    double row_sum = 0;
    for (int p = 0; p < k; ++p) {
      double v = value({basis_->var_id(i, p)});
      if (v < -1e-7) throw Error("marginals: negative singleton moment");
      v = std::max(v, 0.0);
      g.mu(i, p) = v;
      row_sum += v;
    }
    drift = std::max(drift, std::abs(row_sum - 1.0));
    if (std::abs(row_sum - 1.0) > kTol) {
      if (row_sum <= 0) throw Error("marginals: empty row");
      g.mu.row(i) /= row_sum;
    }
  }
  if (max_drift) *max_drift = drift;
  return g;
}

Eigen::MatrixXd Pseudoexpectation::pairwise_marginal(int i, int j) const {
  if (i == j) throw Error("pairwise_marginal: players must differ");
  if (degree() < 2) throw Error("pairwise_marginal: degree below 2");
  const int k = num_actions();
  Eigen::MatrixXd joint(k, k);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q)
      joint(p, q) = value({std::min(basis_->var_id(i, p), basis_->var_id(j, q)),
                           std::max(basis_->var_id(i, p), basis_->var_id(j, q))});
  // Consistency with singleton marginals.
  double gap = 0;
  for (int p = 0; p < k; ++p)
    gap = std::max(gap, std::abs(joint.row(p).sum() - value({basis_->var_id(i, p)})));
  for (int q = 0; q < k; ++q)
    gap = std::max(gap, std::abs(joint.col(q).sum() - value({basis_->var_id(j, q)})));
  if (gap > 1e-4) throw Error("pairwise_marginal: inconsistent with singletons");
  return joint.cwiseMax(0.0).cwiseMin(1.0);
}

double Pseudoexpectation::covariance_block(int i, int j) const {
  const int k = num_actions();
  double total = 0;
  for (int p = 0; p < k; ++p) {
    const double mi = value({basis_->var_id(i, p)});
    for (int q = 0; q < k; ++q) {
      const double mj = value({basis_->var_id(j, q)});
      const Monomial m = i == j && p == q
                             ? Monomial{basis_->var_id(i, p)}
                             : monomial_union(Monomial{basis_->var_id(i, p)},
                                              basis_->var_id(j, q));
      total += std::abs(value(m) - mi * mj);
    }
  }
  return total;
}

double Pseudoexpectation::local_correlation(const Graph& g, int i) const {
  if (g.adj[i].empty()) return 0.0;
  double total = 0;
  for (int j : g.adj[i]) total += covariance_block(i, j);
  return total / static_cast<double>(g.adj[i].size());
}

double Pseudoexpectation::average_local_correlation(const Graph& g) const {
  const auto edges = g.edge_list();
  if (edges.empty()) return 0.0;
  // Each unordered edge contributes both orientation blocks, which are equal.
  const double total = kernels::parallel_sum(
      edges.size(), [&](std::size_t e) { return 2.0 * covariance_block(edges[e].first, edges[e].second); });
  return total / (2.0 * static_cast<double>(edges.size()));
}

double Pseudoexpectation::mutual_information(int i, int j) const {
  Eigen::MatrixXd joint = pairwise_marginal(i, j);
  const double mass = joint.sum();
  if (mass <= 0) return 0.0;
  joint /= mass;
  const Eigen::VectorXd row = joint.rowwise().sum();
  const Eigen::VectorXd col = joint.colwise().sum();
  double mi = 0;
  for (int p = 0; p < joint.rows(); ++p)
    for (int q = 0; q < joint.cols(); ++q) {
      const double v = joint(p, q);
      if (v > 0 && row(p) > 0 && col(q) > 0) mi += v * std::log(v / (row(p) * col(q)));
    }
  return std::max(mi, 0.0);
}

double Pseudoexpectation::marginal_entropy(int i) const {
  double h = 0;
  double total = 0;
  std::vector<double> probs(num_actions());
  for (int p = 0; p < num_actions(); ++p) {
    probs[p] = std::max(value({basis_->var_id(i, p)}), 0.0);
    total += probs[p];
  }
  if (total <= 0) return 0.0;
  for (double v : probs) {
    v /= total;
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

double Pseudoexpectation::global_mi_mean() const {
  const int n = num_players();
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const double off = kernels::parallel_sum(
      pairs.size(), [&](std::size_t e) { return mutual_information(pairs[e].first, pairs[e].second); });
  double diag = 0;
  for (int i = 0; i < n; ++i) diag += marginal_entropy(i);
  return (2.0 * off + diag) / (static_cast<double>(n) * n);
}

Eigen::MatrixXd Pseudoexpectation::moment_matrix() const {
  auto half = MonomialBasis::get(num_players(), num_actions(), degree() / 2);
  const Eigen::Index m = static_cast<Eigen::Index>(half->size());
  Eigen::MatrixXd mat(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = r; c < m; ++c) {
      const double v = value(monomial_union(half->monomial(r), half->monomial(c)));
      mat(r, c) = v;
      mat(c, r) = v;
    }
  return mat;
}

Pseudoexpectation::Validity Pseudoexpectation::check_validity(double psd_tol,
                                                              double value_tol) const {
  Validity v;
  v.min_value = values_.minCoeff();
  v.max_value = values_.maxCoeff();

  double gap = std::abs(value({}) - 1.0);
  // Coloring consistency: sum_p pE[S u {(i,p)}] = pE[S] for players absent
  // from S, for all S that keep the union within degree.
  for (std::size_t idx = 0; idx < basis_->size(); ++idx) {
    const Monomial& s = basis_->monomial(idx);
    if (static_cast<int>(s.size()) > degree() - 1) continue;
    for (int i = 0; i < num_players(); ++i) {
      bool present = false;
      for (int var : s)
        if (basis_->player_of(var) == i) present = true;
      if (present) continue;
      double total = 0;
      for (int p = 0; p < num_actions(); ++p) total += value(monomial_union(s, basis_->var_id(i, p)));
      gap = std::max(gap, std::abs(total - values_[idx]));
    }
  }
  v.max_coloring_gap = gap;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment_matrix(),
                                                    Eigen::EigenvaluesOnly);
  v.min_moment_eigenvalue = es.eigenvalues().minCoeff();

  v.ok = v.min_moment_eigenvalue >= -psd_tol && v.max_coloring_gap <= value_tol &&
         v.min_value >= -value_tol && v.max_value <= 1.0 + value_tol;
  return v;
}

Pseudoexpectation lift_product(const ProductDistribution& gamma, int degree, std::uint64_t cap) {
  gamma.validate();
  const int n = gamma.num_players(), k = gamma.num_actions();
  auto basis = MonomialBasis::get(n, k, degree, cap);
  Eigen::VectorXd vals(basis->size());
  for (std::size_t idx = 0; idx < basis->size(); ++idx) {
    const Monomial& s = basis->monomial(idx);
    double v = 1.0;
    int prev_player = -1;
    for (int var : s) {
      const int i = basis->player_of(var);
      if (i == prev_player) {
        v = 0.0;  // two actions of one player
        break;
      }
      prev_player = i;
      v *= gamma.mu(i, basis->action_of(var));
    }
    vals[static_cast<Eigen::Index>(idx)] = v;
  }
  return Pseudoexpectation(std::move(basis), std::move(vals));
}

}  // namespace polynash
