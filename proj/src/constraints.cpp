#include "polynash/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "polynash/kernels.hpp"

namespace polynash {

std::string family_name(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::Normalization: return "normalization";
    case ConstraintFamily::Booleanity: return "booleanity";
    case ConstraintFamily::Coloring: return "coloring";
    case ConstraintFamily::Cpce: return "cpce";
    case ConstraintFamily::Custom: return "custom";
  }
  return "?";
}

void LinearConstraint::finalize() {
  std::sort(terms.begin(), terms.end());
  std::vector<std::pair<std::size_t, double>> merged;
  for (const auto& [idx, coeff] : terms) {
    if (!merged.empty() && merged.back().first == idx)
      merged.back().second += coeff;
    else
      merged.emplace_back(idx, coeff);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& t) { return t.second == 0.0; }),
               merged.end());
  terms = std::move(merged);
  norm_sq = 0;
  for (const auto& [idx, coeff] : terms) norm_sq += coeff * coeff;
}

double FamilyViolations::max_violation() const {
  double v = std::max({normalization, booleanity, coloring, cpce, custom});
  return std::max(v, std::max(0.0, -psd_min_eigenvalue));
}

namespace {

// Enumerates subsets S (by basis index) with |S| <= max_size, optionally
// excluding every variable of one player.
template <class Fn>
void for_each_subset(const MonomialBasis& basis, int max_size, int excluded_player, Fn&& fn) {
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const Monomial& s = basis.monomial(idx);
    if (static_cast<int>(s.size()) > max_size) break;  // canonical order: sizes ascending
    if (excluded_player >= 0) {
      bool touches = false;
      for (int var : s)
        if (basis.player_of(var) == excluded_player) {
          touches = true;
          break;
        }
      if (touches) continue;
    }
    fn(s);
  }
}

}  // namespace

ConstraintSystem build_constraints(const RescaledGame& game, const Graph& g, int ell, double eps,
                                   const BuildOptions& opts) {
  if (ell < 2) throw Error("build_constraints: degree must be at least 2");
  if (eps <= 0) throw Error("build_constraints: eps must be positive");
  if (g.num_nodes != game.num_players) throw Error("build_constraints: graph/game mismatch");

  ConstraintSystem sys;
  sys.ell = ell;
  sys.cpce_epsilon = eps;
  sys.basis = MonomialBasis::get(game.num_players, game.num_actions, ell, opts.cap);
  const MonomialBasis& basis = *sys.basis;
  const int n = game.num_players, k = game.num_actions;

  // Normalization.
  {
    LinearConstraint c;
    c.family = ConstraintFamily::Normalization;
    c.equality = true;
    c.terms = {{basis.index({}), 1.0}};
    c.rhs = 1.0;
    c.finalize();
    sys.constraints.push_back(std::move(c));
  }

  // Coloring: sum_p pE[a_ip prod_S] = pE[prod_S] for |S| <= l-1, over all S.
  for (int i = 0; i < n; ++i) {
    for_each_subset(basis, ell - 1, -1, [&](const Monomial& s) {
      LinearConstraint c;
      c.family = ConstraintFamily::Coloring;
      c.equality = true;
      for (int p = 0; p < k; ++p)
        c.terms.emplace_back(basis.index(monomial_union(s, basis.var_id(i, p))), 1.0);
      c.terms.emplace_back(basis.index(s), -1.0);
      c.rhs = 0.0;
      c.finalize();
      sys.constraints.push_back(std::move(c));
    });
  }

  // Booleanity audit rows: index idempotence makes both sides the same
  // monomial, so every coefficient cancels.
  if (opts.emit_booleanity_audit) {
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < k; ++p)
        for_each_subset(basis, ell - 2, -1, [&](const Monomial& s) {
          LinearConstraint c;
          c.family = ConstraintFamily::Booleanity;
          c.equality = true;
          const int var = basis.var_id(i, p);
          const Monomial m = monomial_union(s, var);
          c.terms.emplace_back(basis.index(m), 1.0);   // a^2 term collapses
          c.terms.emplace_back(basis.index(m), -1.0);  // linear term
          c.rhs = 0.0;
          c.finalize();
          sys.constraints.push_back(std::move(c));
        });
  }

  // CPCE: for every player i, deviation w and subset S of other players'
  // variables with |S| <= l-2,
  //   pE[(sum_j sum_pq f_ij(p,q) a_ip a_jq - sum_j sum_q f_ij(w,q) a_jq
  //        + eps) prod_S] >= 0.
  for (int i = 0; i < n; ++i) {
    for (int w = 0; w < k; ++w) {
      for_each_subset(basis, ell - 2, i, [&](const Monomial& s) {
        LinearConstraint c;
        c.family = ConstraintFamily::Cpce;
        c.equality = false;
        for (const auto& [j, f] : game.neighbors[i]) {
          for (int p = 0; p < k; ++p) {
            const Monomial sip = monomial_union(s, basis.var_id(i, p));
            for (int q = 0; q < k; ++q) {
              if (f(p, q) != 0.0)
                c.terms.emplace_back(basis.index(monomial_union(sip, basis.var_id(j, q))),
                                     f(p, q));
            }
          }
          for (int q = 0; q < k; ++q) {
            if (f(w, q) != 0.0)
              c.terms.emplace_back(basis.index(monomial_union(s, basis.var_id(j, q))),
                                   -f(w, q));
          }
        }
        c.terms.emplace_back(basis.index(s), eps);
        c.rhs = 0.0;
        c.finalize();
        sys.constraints.push_back(std::move(c));
      });
    }
  }

  // Moment matrix over monomials of size <= floor(l/2).
  auto half = MonomialBasis::get(n, k, ell / 2, opts.cap);
  sys.moment_dim = static_cast<int>(half->size());
  sys.moment_var.resize(static_cast<std::size_t>(sys.moment_dim) * sys.moment_dim);
  sys.var_cells.assign(basis.size(), {});
  for (int r = 0; r < sys.moment_dim; ++r)
    for (int c = 0; c < sys.moment_dim; ++c) {
      const std::size_t var = basis.index(monomial_union(half->monomial(r), half->monomial(c)));
      const std::size_t cell = static_cast<std::size_t>(r) * sys.moment_dim + c;
      sys.moment_var[cell] = var;
      sys.var_cells[var].push_back(cell);
    }

  for (const auto& c : sys.constraints) ++sys.family_counts[c.family];
  return sys;
}

FamilyViolations system_violations(const ConstraintSystem& sys, const Eigen::VectorXd& x) {
  FamilyViolations v;
  const double* xp = x.data();
  auto worst = [&](ConstraintFamily fam) {
    return kernels::parallel_max(
        sys.constraints.size(),
        [&](std::size_t idx) {
          const auto& c = sys.constraints[idx];
          return c.family == fam ? c.violation(xp) : 0.0;
        },
        0.0);
  };
  v.normalization = worst(ConstraintFamily::Normalization);
  v.booleanity = worst(ConstraintFamily::Booleanity);
  v.coloring = worst(ConstraintFamily::Coloring);
  v.cpce = worst(ConstraintFamily::Cpce);
  v.custom = worst(ConstraintFamily::Custom);
  if (sys.has_psd()) {
    Eigen::MatrixXd m(sys.moment_dim, sys.moment_dim);
    for (int r = 0; r < sys.moment_dim; ++r)
      for (int c = 0; c < sys.moment_dim; ++c)
        m(r, c) = x[static_cast<Eigen::Index>(
            sys.moment_var[static_cast<std::size_t>(r) * sys.moment_dim + c])];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    v.psd_min_eigenvalue = es.eigenvalues().minCoeff();
  }
  return v;
}

FamilyViolations validate_table(const Pseudoexpectation& pe, const RescaledGame& game,
                                const Graph& g, int ell, double eps) {
  if (pe.degree() < ell) throw Error("validate_table: table degree below requested level");
  if (g.num_nodes != game.num_players) throw Error("validate_table: graph/game mismatch");
  const MonomialBasis& basis = pe.basis();
  const int n = game.num_players, k = game.num_actions;
  FamilyViolations v;

  v.normalization = std::abs(pe.value({}) - 1.0);

  // Coloring, from the definition.
  for (int i = 0; i < n; ++i) {
    for_each_subset(basis, ell - 1, -1, [&](const Monomial& s) {
      std::vector<std::pair<double, Monomial>> poly;
      for (int p = 0; p < k; ++p) poly.emplace_back(1.0, monomial_union(s, basis.var_id(i, p)));
      poly.emplace_back(-1.0, s);
      v.coloring = std::max(v.coloring, std::abs(pe.evaluate(poly)));
    });
  }

  // Booleanity: a_ip^2 prod_S and a_ip prod_S are the same monomial under the
  // set encoding, so the gap is identically zero; recorded for completeness.
  v.booleanity = 0.0;

  // CPCE slack from the definition.
  for (int i = 0; i < n; ++i) {
    for (int w = 0; w < k; ++w) {
      for_each_subset(basis, ell - 2, i, [&](const Monomial& s) {
        std::vector<std::pair<double, Monomial>> poly;
        for (const auto& [j, f] : game.neighbors[i]) {
          for (int p = 0; p < k; ++p) {
            const Monomial sip = monomial_union(s, basis.var_id(i, p));
            for (int q = 0; q < k; ++q)
              if (f(p, q) != 0.0) poly.emplace_back(f(p, q), monomial_union(sip, basis.var_id(j, q)));
          }
          for (int q = 0; q < k; ++q)
            if (f(w, q) != 0.0) poly.emplace_back(-f(w, q), monomial_union(s, basis.var_id(j, q)));
        }
        poly.emplace_back(eps, s);
        v.cpce = std::max(v.cpce, std::max(0.0, -pe.evaluate(poly)));
      });
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pe.moment_matrix(), Eigen::EigenvaluesOnly);
  v.psd_min_eigenvalue = es.eigenvalues().minCoeff();
  return v;
}

}  // namespace polynash
