#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nakasim/chain.hpp"

namespace nakasim {

/// Opaque stand-in for a VDF output: y_j = F(y_{j-1}) | j.
struct VdfToken {
  std::uint64_t digest = 0;
  std::uint32_t round = 0;
  friend constexpr bool operator==(const VdfToken&, const VdfToken&) = default;
};

/// Append-only, clock-gated output sequence y_0, y_1, ..., y_j.
class VdfChainState {
 public:
  explicit VdfChainState(std::uint64_t key = 0);

  /// Makes outputs up to and including `round` available.
  void advance_to(std::uint32_t round);
  [[nodiscard]] std::uint32_t current_round() const noexcept {
    return static_cast<std::uint32_t>(outputs_.size() - 1);
  }
  /// Throws FutureOutputError when `round` exceeds the clock.
  [[nodiscard]] const VdfToken& output(std::uint32_t round) const;

 private:
  std::uint64_t key_;
  std::vector<VdfToken> outputs_;
};

enum class VdfVerdict {
  kAccept,
  kNotIncreasing,  // (a) embedded rounds decrease somewhere
  kTooEarly,       // (b) k-th block carries a round below k-1
  kFutureOutput,   // (c) a round beyond round-1
  kDuplicate,      // (d) two blocks share a round
};

std::string_view to_string(VdfVerdict v) noexcept;

struct VdfCheck {
  VdfVerdict verdict = VdfVerdict::kAccept;
  BlockId offender = kGenesis;  // first block (from genesis) violating the reported condition
  [[nodiscard]] bool accepted() const noexcept { return verdict == VdfVerdict::kAccept; }
};

/// Full walk from genesis to `tip`; reports the first condition in the
/// order (a), (b), (c), (d) that fails anywhere on the chain. The duplicate
/// scan is all-pairs; this is the reference VdfValidator is checked against.
VdfCheck validate_chain(const BlockStore& store, BlockId tip, std::uint32_t round);

/// Same verdicts as validate_chain, with per-block summaries cached so each
/// block is examined once.
class VdfValidator {
 public:
  explicit VdfValidator(const BlockStore& store) : store_(&store) {}

  VdfCheck check(BlockId tip, std::uint32_t round);

 private:
  struct Summary {
    BlockId decrease{UINT32_MAX};
    BlockId too_early{UINT32_MAX};
    BlockId duplicate{UINT32_MAX};
    BlockId max_block = kGenesis;
    std::uint32_t max_round = 0;
  };
  const Summary& summary(BlockId id);

  const BlockStore* store_;
  std::vector<Summary> cache_;
};

}  // namespace nakasim
