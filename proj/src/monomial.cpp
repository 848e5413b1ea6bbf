#include "polynash/monomial.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace polynash {

Monomial monomial_union(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Monomial monomial_union(const Monomial& a, int var) {
  Monomial out;
  out.reserve(a.size() + 1);
  auto it = std::lower_bound(a.begin(), a.end(), var);
  if (it != a.end() && *it == var) return a;
  out.insert(out.end(), a.begin(), it);
  out.push_back(var);
  out.insert(out.end(), it, a.end());
  return out;
}

std::uint64_t count_monomials(int nvars, int degree) {
  std::uint64_t total = 0;
  for (int s = 0; s <= std::min(degree, nvars); ++s) {
    // C(nvars, s), with saturation
    std::uint64_t c = 1;
    for (int t = 1; t <= s; ++t) {
      c = c * static_cast<std::uint64_t>(nvars - t + 1) / static_cast<std::uint64_t>(t);
      if (c > (1ull << 62)) return 1ull << 62;
    }
    total += c;
    if (total > (1ull << 62)) return 1ull << 62;
  }
  return total;
}

MonomialBasis::MonomialBasis(int num_players, int num_actions, int degree, std::uint64_t cap)
    : num_players_(num_players), num_actions_(num_actions), degree_(degree) {
  if (num_players < 1 || num_actions < 1) throw Error("monomial basis: bad dimensions");
  if (degree < 0) throw Error("monomial basis: negative degree");
  const int nvars = num_players * num_actions;
  const std::uint64_t total = count_monomials(nvars, degree);
  if (total > cap)
    throw Error("monomial basis: table size " + std::to_string(total) +
                " exceeds cap " + std::to_string(cap));

  monomials_.reserve(total);
  index_.reserve(total);
  // Size 0, then each size in lexicographic order of the id sequence.
  monomials_.push_back({});
  Monomial cur;
  for (int s = 1; s <= std::min(degree, nvars); ++s) {
    cur.resize(s);
    for (int t = 0; t < s; ++t) cur[t] = t;
    while (true) {
      monomials_.push_back(cur);
      int pos = s - 1;
      while (pos >= 0 && cur[pos] == nvars - s + pos) --pos;
      if (pos < 0) break;
      ++cur[pos];
      for (int t = pos + 1; t < s; ++t) cur[t] = cur[t - 1] + 1;
    }
  }
  for (std::size_t idx = 0; idx < monomials_.size(); ++idx) index_.emplace(monomials_[idx], idx);
}

std::ptrdiff_t MonomialBasis::find(const Monomial& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::size_t MonomialBasis::index(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) throw Error("monomial basis: monomial outside basis");
  return it->second;
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int num_players, int num_actions,
                                                        int degree, std::uint64_t cap) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::weak_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(num_players, num_actions, degree);
  if (auto it = cache.find(key); it != cache.end()) {
    if (auto sp = it->second.lock()) return sp;
  }
  auto sp = std::make_shared<const MonomialBasis>(num_players, num_actions, degree, cap);
  cache[key] = sp;
  return sp;
}

}  // namespace polynash
