#include "polynash/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "polynash/graph.hpp"

namespace polynash {

namespace {

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int t = 0; t < exp; ++t) {
    if (out > (1ull << 62) / std::max<std::uint64_t>(base, 1)) return 1ull << 62;
    out *= base;
  }
  return out;
}

}  // namespace

std::size_t JointDistribution::profile_index(const PureProfile& a) const {
  std::size_t idx = 0, stride = 1;
  for (int i = 0; i < num_players; ++i) {
    idx += static_cast<std::size_t>(a.action[i]) * stride;
    stride *= static_cast<std::size_t>(num_actions);
  }
  return idx;
}

PureProfile JointDistribution::profile_of(std::size_t idx) const {
  PureProfile a;
  a.action.resize(num_players);
  for (int i = 0; i < num_players; ++i) {
    a.action[i] = static_cast<int>(idx % num_actions);
    idx /= num_actions;
  }
  return a;
}

void JointDistribution::validate(double tol) const {
  double total = 0;
  for (double v : prob) {
    if (v < -tol) throw Error("joint distribution: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > tol) throw Error("joint distribution: not normalized");
}

Pseudoexpectation JointDistribution::to_pseudoexpectation(int degree, std::uint64_t cap) const {
  auto basis = MonomialBasis::get(num_players, num_actions, degree, cap);
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(basis->size());
  for (std::size_t idx = 0; idx < prob.size(); ++idx) {
    if (prob[idx] == 0) continue;
    const PureProfile a = profile_of(idx);
    // Accumulate over every sub-monomial consistent with the profile: those
    // are exactly the subsets of { (i, a_i) }.
    std::vector<int> vars(num_players);
    for (int i = 0; i < num_players; ++i) vars[i] = basis->var_id(i, a.action[i]);
    const int max_size = std::min(degree, num_players);
    // Iterate subsets of players of size <= max_size.
    std::vector<int> pick;
    auto recurse = [&](auto&& self, int start) -> void {
      Monomial m;
      m.reserve(pick.size());
      for (int i : pick) m.push_back(vars[i]);
      std::sort(m.begin(), m.end());
      vals[static_cast<Eigen::Index>(basis->index(m))] += prob[idx];
      if (static_cast<int>(pick.size()) == max_size) return;
      for (int i = start; i < num_players; ++i) {
        pick.push_back(i);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    recurse(recurse, 0);
  }
  return Pseudoexpectation(std::move(basis), std::move(vals));
}

JointDistribution JointDistribution::conditioned(int player, int action) const {
  JointDistribution out = *this;
  double mass = 0;
  for (std::size_t idx = 0; idx < prob.size(); ++idx) {
    if (profile_of(idx).action[player] != action) out.prob[idx] = 0;
    mass += out.prob[idx];
  }
  if (mass <= kProbFloor) throw ConditioningOnNullEvent("joint conditioning on null event");
  for (double& v : out.prob) v /= mass;
  return out;
}

Eigen::MatrixXd JointDistribution::pairwise(int i, int j) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(num_actions, num_actions);
  for (std::size_t idx = 0; idx < prob.size(); ++idx) {
    const PureProfile a = profile_of(idx);
    out(a.action[i], a.action[j]) += prob[idx];
  }
  return out;
}

ProductDistribution JointDistribution::marginals() const {
  ProductDistribution g;
  g.mu = Eigen::MatrixXd::Zero(num_players, num_actions);
  for (std::size_t idx = 0; idx < prob.size(); ++idx) {
    const PureProfile a = profile_of(idx);
    for (int i = 0; i < num_players; ++i) g.mu(i, a.action[i]) += prob[idx];
  }
  return g;
}

JointDistribution JointDistribution::from_product(const ProductDistribution& gamma,
                                                  std::uint64_t cap) {
  const int n = gamma.num_players(), k = gamma.num_actions();
  const std::uint64_t size = pow_u64(k, n);
  if (size > cap) throw Error("joint distribution: profile space exceeds cap");
  JointDistribution out;
  out.num_players = n;
  out.num_actions = k;
  out.prob.assign(size, 0.0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    const PureProfile a = out.profile_of(idx);
    double v = 1;
    for (int i = 0; i < n; ++i) v *= gamma.mu(i, a.action[i]);
    out.prob[idx] = v;
  }
  return out;
}

std::vector<PureProfile> enumerate_pure_nash(const RescaledGame& game, std::uint64_t cap) {
  const int n = game.num_players, k = game.num_actions;
  const std::uint64_t total = pow_u64(k, n);
  if (total > cap) throw Error("enumerate_pure_nash: profile space exceeds cap");

  std::vector<PureProfile> out;
  PureProfile a;
  a.action.assign(n, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rem = idx;
    for (int i = 0; i < n; ++i) {
      a.action[i] = static_cast<int>(rem % k);
      rem /= k;
    }
    bool nash = true;
    for (int i = 0; i < n && nash; ++i) {
      const int orig = a.action[i];
      const double base = game.pure_payoff(i, a);
      for (int w = 0; w < k && nash; ++w) {
        if (w == orig) continue;
        a.action[i] = w;
        if (game.pure_payoff(i, a) > base + kTol) nash = false;
      }
      a.action[i] = orig;
    }
    if (nash) out.push_back(a);
  }
  return out;
}

namespace {

// Solves the linear indifference system for one support profile. Unknowns
// are mu_iq for q in S_i. Rows: per-player normalization, then equality of
// in-support payoffs (linear in the other players' probabilities).
std::optional<ProductDistribution> try_support(const RescaledGame& game,
                                               const std::vector<std::vector<int>>& support,
                                               double eps_oracle) {
  const int n = game.num_players, k = game.num_actions;
  std::vector<int> offset(n + 1, 0);
  for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + static_cast<int>(support[i].size());
  const int dim = offset[n];

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  int row = 0;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < static_cast<int>(support[i].size()); ++t) a(row, offset[i] + t) = 1.0;
    b(row) = 1.0;
    ++row;
  }
  for (int i = 0; i < n; ++i) {
    for (std::size_t t = 1; t < support[i].size(); ++t) {
      const int p0 = support[i][0], p1 = support[i][t];
      for (const auto& [j, f] : game.neighbors[i]) {
        for (std::size_t u = 0; u < support[j].size(); ++u) {
          const int q = support[j][u];
          a(row, offset[j] + static_cast<int>(u)) += f(p0, q) - f(p1, q);
        }
      }
      ++row;
    }
  }

  const Eigen::VectorXd x = a.fullPivLu().solve(b);
  if (!x.allFinite()) return std::nullopt;
  if ((a * x - b).array().abs().maxCoeff() > 1e-7) return std::nullopt;

  ProductDistribution gamma;
  gamma.mu = Eigen::MatrixXd::Zero(n, k);
  for (int i = 0; i < n; ++i)
    for (std::size_t t = 0; t < support[i].size(); ++t) {
      const double v = x(offset[i] + static_cast<int>(t));
      if (v < -1e-9) return std::nullopt;
      gamma.mu(i, support[i][t]) = std::max(v, 0.0);
    }
  for (int i = 0; i < n; ++i) {
    const double s = gamma.mu.row(i).sum();
    if (s <= 0) return std::nullopt;
    gamma.mu.row(i) /= s;
  }

  const NashReport rep = verify_epsilon_nash(game, gamma, eps_oracle);
  if (!rep.pass) return std::nullopt;
  return gamma;
}

}  // namespace

std::optional<ProductDistribution> mixed_nash_oracle(const RescaledGame& game, double eps_oracle,
                                                     std::uint64_t cap) {
  const int n = game.num_players, k = game.num_actions;
  const std::uint64_t patterns = pow_u64((1u << k) - 1, n);
  if (patterns > cap) throw Error("mixed_nash_oracle: support space exceeds cap");

  // Nonempty supports per player, ordered by size then lexicographic mask.
  std::vector<std::vector<int>> masks_by_order;
  for (int size = 1; size <= k; ++size)
    for (int mask = 1; mask < (1 << k); ++mask)
      if (__builtin_popcount(mask) == size) {
        std::vector<int> s;
        for (int p = 0; p < k; ++p)
          if (mask & (1 << p)) s.push_back(p);
        masks_by_order.push_back(std::move(s));
      }

  std::vector<std::vector<int>> support(n);
  std::vector<int> choice(n, 0);
  while (true) {
    for (int i = 0; i < n; ++i) support[i] = masks_by_order[choice[i]];
    if (auto gamma = try_support(game, support, eps_oracle)) return gamma;
    int pos = n - 1;
    while (pos >= 0 && choice[pos] + 1 == static_cast<int>(masks_by_order.size())) {
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++choice[pos];
  }
  return std::nullopt;
}

double max_ce_regret(const RescaledGame& game, const JointDistribution& zeta) {
  const int n = game.num_players, k = game.num_actions;
  double worst = 0;
  // For every recommendation a and swap w:
  // sum_{profiles: a_i = a} zeta * (payoff_i(profile) - payoff_i(w, rest)).
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < k; ++a) {
      Eigen::VectorXd swap_gain = Eigen::VectorXd::Zero(k);
      for (std::size_t idx = 0; idx < zeta.prob.size(); ++idx) {
        if (zeta.prob[idx] == 0) continue;
        PureProfile prof = zeta.profile_of(idx);
        if (prof.action[i] != a) continue;
        const double base = game.pure_payoff(i, prof);
        for (int w = 0; w < k; ++w) {
          prof.action[i] = w;
          swap_gain(w) += zeta.prob[idx] * (game.pure_payoff(i, prof) - base);
        }
        prof.action[i] = a;
      }
      worst = std::max(worst, swap_gain.maxCoeff());
    }
  }
  return worst;
}

JointDistribution correlated_equilibrium_lp(const RescaledGame& game, std::uint64_t cap,
                                            SolveOptions opts) {
  const int n = game.num_players, k = game.num_actions;
  const std::uint64_t size = pow_u64(k, n);
  if (size > cap) throw Error("correlated_equilibrium_lp: profile space exceeds cap");

  JointDistribution shape;
  shape.num_players = n;
  shape.num_actions = k;
  shape.prob.assign(size, 0.0);

  LinearFeasibility lp;
  lp.num_vars = size;
  lp.lower = 0.0;

  {
    LinearConstraint norm;
    norm.family = ConstraintFamily::Normalization;
    norm.equality = true;
    for (std::size_t idx = 0; idx < size; ++idx) norm.terms.emplace_back(idx, 1.0);
    norm.rhs = 1.0;
    norm.finalize();
    lp.rows.push_back(std::move(norm));
  }

  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < k; ++a) {
      for (int w = 0; w < k; ++w) {
        if (w == a) continue;
        LinearConstraint c;
        c.family = ConstraintFamily::Custom;
        c.equality = false;
        for (std::size_t idx = 0; idx < size; ++idx) {
          PureProfile prof = shape.profile_of(idx);
          if (prof.action[i] != a) continue;
          const double base = game.pure_payoff(i, prof);
          prof.action[i] = w;
          const double dev = game.pure_payoff(i, prof);
          if (base != dev) c.terms.emplace_back(idx, base - dev);
        }
        c.rhs = 0.0;
        c.finalize();
        if (!c.terms.empty()) lp.rows.push_back(std::move(c));
      }
    }
  }

  // Uniform start; a correlated equilibrium always exists.
  Eigen::VectorXd start =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(size), 1.0 / static_cast<double>(size));
  if (opts.tolerance > 1e-9) opts.tolerance = 1e-9;
  LinearOutcome out = solve_linear_feasible(lp, opts, &start);
  if (out.status != SolveStatus::Feasible)
    throw Error("correlated_equilibrium_lp: feasibility solve failed (" +
                status_name(out.status) + ")");

  shape.prob.assign(out.x.data(), out.x.data() + out.x.size());
  for (double& v : shape.prob) v = std::max(v, 0.0);
  double mass = 0;
  for (double v : shape.prob) mass += v;
  for (double& v : shape.prob) v /= mass;
  return shape;
}

LiftFeasibilityReport verify_lift_feasibility(const RescaledGame& game,
                                              const ProductDistribution& gamma, int ell,
                                              double eps) {
  const Graph g = graph_of(game.base);
  const Pseudoexpectation pe = lift_product(gamma, ell);
  LiftFeasibilityReport rep;
  rep.violations = validate_table(pe, game, g, ell, eps);
  rep.min_slack = -rep.violations.max_violation();
  rep.pass = rep.min_slack >= -1e-6;
  return rep;
}

}  // namespace polynash
