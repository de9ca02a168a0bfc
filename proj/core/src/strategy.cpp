#include "nakasim/strategy.hpp"

#include <string>

#include "nakasim/errors.hpp"

namespace nakasim {

std::string_view to_string(StrategyTag tag) noexcept {
  switch (tag) {
    case StrategyTag::kUniformRandom: return "uniform";
    case StrategyTag::kFirstSeen: return "first-seen";
    case StrategyTag::kLexFirst: return "lex-first";
    case StrategyTag::kGlobalCoin: return "global-coin";
  }
  return "?";
}

StrategyTag parse_strategy(std::string_view name) {
  if (name == "uniform") return StrategyTag::kUniformRandom;
  if (name == "first-seen") return StrategyTag::kFirstSeen;
  if (name == "lex-first") return StrategyTag::kLexFirst;
  if (name == "global-coin") return StrategyTag::kGlobalCoin;
  throw ArgumentError("unknown strategy '" + std::string(name) + "'");
}

namespace detail {

Chain choose_unchecked(StrategyTag strategy, std::span<const Candidate> candidates,
                       RandomStream& rng, const ChoiceContext& ctx) {
  if (candidates.size() == 1) return candidates.front().chain;
  switch (strategy) {
    case StrategyTag::kUniformRandom:
      return candidates[rng.uniform_index(candidates.size())].chain;
    case StrategyTag::kFirstSeen: {
      const Candidate* best = &candidates.front();
      for (const Candidate& c : candidates) {
        if (c.rank < best->rank) best = &c;
      }
      return best->chain;
    }
    case StrategyTag::kLexFirst: {
      if (ctx.store == nullptr) throw ArgumentError("choose: lex-first needs a block store");
      const Candidate* best = &candidates.front();
      std::uint64_t best_key = (*ctx.store)[best->chain.tip].digest;
      for (const Candidate& c : candidates) {
        const std::uint64_t key = (*ctx.store)[c.chain.tip].digest;
        if (key < best_key || (key == best_key && c.chain.tip < best->chain.tip)) {
          best = &c;
          best_key = key;
        }
      }
      return best->chain;
    }
    case StrategyTag::kGlobalCoin: {
      const Candidate* best = &candidates.front();
      std::uint64_t best_key = coin_priority(ctx.coin_key, ctx.coin_epoch, best->chain.tip);
      for (const Candidate& c : candidates) {
        const std::uint64_t key = coin_priority(ctx.coin_key, ctx.coin_epoch, c.chain.tip);
        if (key < best_key || (key == best_key && c.chain.tip < best->chain.tip)) {
          best = &c;
          best_key = key;
        }
      }
      return best->chain;
    }
  }
  throw ArgumentError("choose: invalid strategy tag");
}

}  // namespace detail

Chain choose(StrategyTag strategy, std::span<const Candidate> candidates, RandomStream& rng,
             const ChoiceContext& ctx) {
  if (candidates.empty()) throw ArgumentError("choose: empty candidate list");
  const std::uint32_t len = candidates.front().chain.length;
  for (const Candidate& c : candidates) {
    if (c.chain.length != len) throw ContractViolation("choose: candidates differ in length");
  }
  return detail::choose_unchecked(strategy, candidates, rng, ctx);
}

}  // namespace nakasim
