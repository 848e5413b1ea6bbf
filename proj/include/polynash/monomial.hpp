#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "polynash/common.hpp"

namespace polynash {

// A multilinear monomial over action indicators, stored as a sorted set of
// variable ids. Variable (i, p) has id i*k + p. Set semantics make the
// booleanity identity a^2 = a structural.
using Monomial = std::vector<int>;

Monomial monomial_union(const Monomial& a, const Monomial& b);
Monomial monomial_union(const Monomial& a, int var);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (int v : m) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ull;
    return h;
  }
};

// All monomials of size <= degree over the N*k indicator variables, in
// canonical order: by size, then lexicographically on the id sequence.
class MonomialBasis {
 public:
  MonomialBasis(int num_players, int num_actions, int degree,
                std::uint64_t cap = enumeration_cap());

  int num_players() const { return num_players_; }
  int num_actions() const { return num_actions_; }
  int degree() const { return degree_; }
  int num_vars() const { return num_players_ * num_actions_; }
  std::size_t size() const { return monomials_.size(); }

  const Monomial& monomial(std::size_t idx) const { return monomials_[idx]; }
  // Index in canonical order, or -1 when absent (oversize).
  std::ptrdiff_t find(const Monomial& m) const;
  std::size_t index(const Monomial& m) const;  // throws when absent

  int var_id(int player, int action) const { return player * num_actions_ + action; }
  int player_of(int var) const { return var / num_actions_; }
  int action_of(int var) const { return var % num_actions_; }

  // Shared, cached bases keyed by (N, k, degree).
  static std::shared_ptr<const MonomialBasis> get(int num_players, int num_actions, int degree,
                                                  std::uint64_t cap = enumeration_cap());

 private:
  int num_players_, num_actions_, degree_;
  std::vector<Monomial> monomials_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

// Number of monomials of size <= degree over nvars variables.
std::uint64_t count_monomials(int nvars, int degree);

}  // namespace polynash
