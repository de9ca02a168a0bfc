#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "nakasim/chain.hpp"
#include "nakasim/rng.hpp"

namespace nakasim {

enum class StrategyTag { kUniformRandom, kFirstSeen, kLexFirst, kGlobalCoin };

std::string_view to_string(StrategyTag tag) noexcept;
/// Accepts "uniform", "first-seen", "lex-first", "global-coin". Throws ArgumentError.
StrategyTag parse_strategy(std::string_view name);

/// A longest-chain candidate with its arrival rank at the choosing node.
/// Rank 0 is the node's own current tip.
struct Candidate {
  Chain chain;
  std::uint32_t rank = 0;
};

/// Shared priority of `tip` in coin epoch `epoch`; lower wins. Every node
/// computes the same value, so all subsets obey one relative order.
constexpr std::uint64_t coin_priority(std::uint64_t coin_key, std::uint64_t epoch, BlockId tip) noexcept {
  return mix_all({coin_key, epoch, tip.value});
}

struct ChoiceContext {
  const BlockStore* store = nullptr;  // digests for LexFirst
  std::uint64_t coin_key = 0;
  std::uint64_t coin_epoch = 0;
};

/// Picks one chain among equal-length, pairwise-distinct candidates.
/// Throws ArgumentError when empty and ContractViolation on unequal lengths.
Chain choose(StrategyTag strategy, std::span<const Candidate> candidates, RandomStream& rng,
             const ChoiceContext& ctx);

namespace detail {
/// `choose` without the length check, for callers that validated the set.
Chain choose_unchecked(StrategyTag strategy, std::span<const Candidate> candidates,
                       RandomStream& rng, const ChoiceContext& ctx);
}  // namespace detail

}  // namespace nakasim
