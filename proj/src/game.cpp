#include "polynash/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polynash {

void PolymatrixGame::validate() const {
  if (num_players < 1) throw Error("game: player count must be positive");
  if (num_actions < 1) throw Error("game: action count must be positive");
  std::vector<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i == e.j) throw Error("game: self-loop edge");
    if (e.i < 0 || e.j < 0 || e.i >= num_players || e.j >= num_players)
      throw Error("game: edge endpoint out of range");
    if (e.pay_ij.rows() != num_actions || e.pay_ij.cols() != num_actions ||
        e.pay_ji.rows() != num_actions || e.pay_ji.cols() != num_actions)
      throw Error("game: payoff table has wrong shape");
    if (!e.pay_ij.allFinite() || !e.pay_ji.allFinite())
      throw Error("game: non-finite payoff entry");
    seen.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw Error("game: duplicate edge");
}

void ProductDistribution::validate(double tol) const {
  for (int i = 0; i < num_players(); ++i) {
    double total = 0;
    for (int p = 0; p < num_actions(); ++p) {
      if (mu(i, p) < -tol) throw Error("distribution: negative probability");
      total += mu(i, p);
    }
    if (std::abs(total - 1.0) > tol) throw Error("distribution: row does not sum to 1");
  }
}

ProductDistribution ProductDistribution::uniform(int n, int k) {
  ProductDistribution g;
  g.mu = Eigen::MatrixXd::Constant(n, k, 1.0 / k);
  return g;
}

ProductDistribution ProductDistribution::pure(const PureProfile& a, int k) {
  ProductDistribution g;
  g.mu = Eigen::MatrixXd::Zero(static_cast<int>(a.action.size()), k);
  for (int i = 0; i < static_cast<int>(a.action.size()); ++i) g.mu(i, a.action[i]) = 1.0;
  return g;
}

double RescaledGame::pure_payoff(int i, const PureProfile& a) const {
  double total = 0;
  for (const auto& [j, f] : neighbors[i]) total += f(a.action[i], a.action[j]);
  return total;
}

RescaledGame rescale(const PolymatrixGame& game) {
  game.validate();
  const int n = game.num_players;
  const int k = game.num_actions;

  RescaledGame out;
  out.base = game;
  out.num_players = n;
  out.num_actions = k;
  out.num_edges = static_cast<int>(game.edges.size());
  out.avg_degree = n > 0 ? 2.0 * out.num_edges / n : 0.0;
  out.neighbors.assign(n, {});
  out.upper = Eigen::VectorXd::Zero(n);
  out.lower = Eigen::VectorXd::Zero(n);

  // Raw directed tables per player.
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> raw(n);
  for (const auto& e : game.edges) {
    raw[e.i].emplace_back(e.j, e.pay_ij);
    raw[e.j].emplace_back(e.i, e.pay_ji);
  }
  for (auto& lst : raw)
    std::sort(lst.begin(), lst.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

  // U_i / L_i decompose over neighbors: for a fixed own action only the
  // per-edge extremum over the neighbor's action matters.
  for (int i = 0; i < n; ++i) {
    if (raw[i].empty()) continue;
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (int a = 0; a < k; ++a) {
      double hi = 0, lo = 0;
      for (const auto& [j, tbl] : raw[i]) {
        hi += tbl.row(a).maxCoeff();
        lo += tbl.row(a).minCoeff();
      }
      best = std::max(best, hi);
      worst = std::min(worst, lo);
    }
    out.upper(i) = best;
    out.lower(i) = worst;

    const double range = best - worst;
    const double deg = static_cast<double>(raw[i].size());
    for (const auto& [j, tbl] : raw[i]) {
      Eigen::MatrixXd f;
      if (std::abs(range) <= 1e-12 * std::max({1.0, std::abs(best), std::abs(worst)})) {
        f = Eigen::MatrixXd::Zero(k, k);  // degenerate range
      } else {
        f = (tbl.array() - worst / deg) / range;
      }
      out.neighbors[i].emplace_back(j, std::move(f));
    }
  }

  double max_abs = 0;
  for (int i = 0; i < n; ++i)
    for (const auto& [j, f] : out.neighbors[i])
      max_abs = std::max(max_abs, f.array().abs().maxCoeff());
  out.max_abs_f = max_abs;

  // Smallest L certifying the smoothness definition; nudged up so that
  // max |f| <= L / d holds under floating-point division as well.
  double L = out.avg_degree * max_abs;
  if (out.avg_degree > 0) {
    while (L / out.avg_degree < max_abs) L = std::nextafter(L, std::numeric_limits<double>::infinity());
  }
  out.smoothness = L;
  return out;
}

namespace {

// Expected payoff to i of each own action w: sum_j sum_q f_ij(w,q) mu_jq.
Eigen::VectorXd deviation_values(const RescaledGame& game, const Eigen::MatrixXd& mu, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(game.num_actions);
  for (const auto& [j, f] : game.neighbors[i]) v += f * mu.row(j).transpose();
  return v;
}

}  // namespace

double phi(const RescaledGame& game, const ProductDistribution& gamma, int i) {
  if (game.neighbors[i].empty()) return 0.0;
  const Eigen::VectorXd v = deviation_values(game, gamma.mu, i);
  const double current = gamma.mu.row(i) * v;
  return v.maxCoeff() - current;
}

Eigen::VectorXd phi_all(const RescaledGame& game, const ProductDistribution& gamma) {
  Eigen::VectorXd out(game.num_players);
  for (int i = 0; i < game.num_players; ++i) out(i) = phi(game, gamma, i);
  return out;
}

double phi_restricted(const RescaledGame& game, const ProductDistribution& gamma,
                      const std::vector<char>& in_q, int i) {
  if (i < 0 || i >= game.num_players || !in_q[i])
    throw Error("phi_restricted: player not in the restriction set");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(game.num_actions);
  bool any = false;
  for (const auto& [j, f] : game.neighbors[i]) {
    if (!in_q[j]) continue;
    v += f * gamma.mu.row(j).transpose();
    any = true;
  }
  if (!any) return 0.0;
  const double current = gamma.mu.row(i) * v;
  return v.maxCoeff() - current;
}

NashReport verify_epsilon_nash(const RescaledGame& game, const ProductDistribution& gamma,
                               double eps) {
  if (eps < 0) throw Error("verify_epsilon_nash: eps must be nonnegative");
  NashReport r;
  r.per_player = phi_all(game, gamma);
  r.max_phi = 0;
  r.argmax_player = 0;
  if (game.num_players > 0) {
    Eigen::Index arg = 0;
    r.max_phi = r.per_player.maxCoeff(&arg);
    r.argmax_player = static_cast<int>(arg);
  }
  r.pass = r.max_phi <= eps + kTol;
  return r;
}

double social_welfare(const RescaledGame& game, const ProductDistribution& gamma) {
  double total = 0;
  for (int i = 0; i < game.num_players; ++i) {
    const Eigen::VectorXd v = deviation_values(game, gamma.mu, i);
    total += gamma.mu.row(i) * v;
  }
  return total;
}

}  // namespace polynash
