#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nakasim/strategy.hpp"

namespace nakasim {

enum class AdversaryTag { kNone, kPrivateChain, kSelectiveRelease, kLexGrind, kFirstSeenSplit };

std::string_view to_string(AdversaryTag tag) noexcept;
/// Accepts "none", "private-chain", "selective-release", "lex-grind",
/// "first-seen-split". Throws ArgumentError.
AdversaryTag parse_adversary(std::string_view name);

/// Parameters of one simulation run. Corruption is static: nodes
/// n-b..n-1 are corrupt, 0..n-b-1 honest.
struct SimConfig {
  std::uint32_t n = 4;
  std::uint32_t b = 0;
  double p = 1.0;
  std::uint32_t T = 8;
  StrategyTag strategy = StrategyTag::kUniformRandom;
  AdversaryTag adversary = AdversaryTag::kNone;
  bool selective_relay = false;
  bool vdf_mode = false;
  std::uint64_t seed = 1;

  [[nodiscard]] std::uint32_t honest_count() const noexcept { return n - b; }
  [[nodiscard]] bool is_corrupt(std::uint32_t node) const noexcept { return node >= n - b; }

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// One-line `key=value` rendering, stable across runs.
std::string describe(const SimConfig& cfg);

}  // namespace nakasim
