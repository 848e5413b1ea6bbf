#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "polynash/game.hpp"
#include "polynash/graph.hpp"
#include "polynash/pseudoexpectation.hpp"

namespace polynash {

enum class ConstraintFamily { Normalization, Booleanity, Coloring, Cpce, Custom };

std::string family_name(ConstraintFamily f);

// Affine constraint over the moment table: terms . x (== or >=) rhs.
struct LinearConstraint {
  ConstraintFamily family = ConstraintFamily::Custom;
  bool equality = true;
  std::vector<std::pair<std::size_t, double>> terms;  // (variable index, coeff)
  double rhs = 0;
  double norm_sq = 0;

  double residual(const double* x) const {
    double v = -rhs;
    for (const auto& [idx, coeff] : terms) v += coeff * x[idx];
    return v;  // equality wants 0, inequality wants >= 0
  }
  double violation(const double* x) const {
    const double r = residual(x);
    return equality ? std::abs(r) : std::max(0.0, -r);
  }
  void finalize();  // sort/merge terms, drop zeros, compute norm
};

// The degree-l system: equality and inequality families over the monomial
// table plus one PSD constraint on the assembled moment matrix.
struct ConstraintSystem {
  std::shared_ptr<const MonomialBasis> basis;
  std::vector<LinearConstraint> constraints;

  // Moment matrix over monomials of size <= floor(l/2); entry (r, c) is the
  // table value of the row/column union.
  int moment_dim = 0;
  std::vector<std::size_t> moment_var;               // row-major, size moment_dim^2
  std::vector<std::vector<std::size_t>> var_cells;   // variable -> flat matrix cells

  double cpce_epsilon = 0;
  int ell = 0;
  std::map<ConstraintFamily, std::size_t> family_counts;

  std::size_t num_vars() const { return basis ? basis->size() : 0; }
  bool has_psd() const { return moment_dim > 0; }
};

struct BuildOptions {
  bool emit_booleanity_audit = false;  // structural under set encoding
  std::uint64_t cap = enumeration_cap();
};

// Families: normalization pE[1]=1; coloring Sherali-Adams equalities for
// |S| <= l-1; CPCE inequalities for every player, deviation and subset S of
// other players' variables with |S| <= l-2; PSD on the moment matrix.
// Booleanity is structural in the multilinear set encoding and only emitted
// as audit rows on request.
ConstraintSystem build_constraints(const RescaledGame& game, const Graph& g, int ell, double eps,
                                   const BuildOptions& opts = {});

// Per-family violation summary.
struct FamilyViolations {
  double normalization = 0;
  double booleanity = 0;
  double coloring = 0;
  double cpce = 0;
  double custom = 0;
  double psd_min_eigenvalue = 0;  // negative part counts as violation

  double max_violation() const;
};

// First-principles checker: walks the same families directly off the game
// definition and evaluates them through the pseudoexpectation interface,
// independently of any compiled constraint rows.
FamilyViolations validate_table(const Pseudoexpectation& pe, const RescaledGame& game,
                                const Graph& g, int ell, double eps);

// Residuals of a value vector against compiled rows (solver-side view).
FamilyViolations system_violations(const ConstraintSystem& sys, const Eigen::VectorXd& x);

}  // namespace polynash
