#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace polynash {

// Absolute tolerance used for probability and payoff comparisons throughout.
inline constexpr double kTol = 1e-9;

// Marginal probabilities at or below this floor are treated as null events.
inline constexpr double kProbFloor = 1e-9;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConditioningOnNullEvent : Error {
  explicit ConditioningOnNullEvent(const std::string& what) : Error(what) {}
};

// Global cap on enumeration sizes (moment tables, profile spaces).
// Overridable through the POLYNASH_CAP environment variable.
inline std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("POLYNASH_CAP")) {
    const auto v = std::strtoull(env, nullptr, 10);
    if (v > 0) return v;
  }
  return 1u << 21;
}

// SplitMix64 step, used to derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace polynash
