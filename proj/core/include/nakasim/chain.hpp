#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nakasim {

using NodeIndex = std::int32_t;
inline constexpr NodeIndex kGenesisMiner = -1;

/// Opaque block handle, unique within one BlockStore.
struct BlockId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(BlockId, BlockId) = default;
};

inline constexpr BlockId kGenesis{0};

struct Block {
  BlockId id;
  std::optional<BlockId> parent;  // empty only for genesis
  NodeIndex miner = kGenesisMiner;
  std::uint32_t round = 0;
  bool honest = true;
  std::uint32_t vdf_round = 0;
  std::uint32_t depth = 0;  // parent hops to genesis
  // Honest non-genesis blocks on the path genesis..this block.
  std::uint32_t honest_in_chain = 0;
  // Pseudo-hash standing in for the block hash; the LexFirst order key.
  std::uint64_t digest = 0;
};

/// A chain is identified by its tip; length counts genesis.
struct Chain {
  BlockId tip = kGenesis;
  std::uint32_t length = 1;
  friend constexpr bool operator==(const Chain& a, const Chain& b) { return a.tip == b.tip; }
};

/// Append-only block tree rooted at genesis.
class BlockStore {
 public:
  /// `salt` keys the block digests. With `allow_same_round_chaining`, a
  /// child may share its parent's round (multi-block-per-round extension
  /// available to an adversary when no VDF gate is in force).
  explicit BlockStore(std::uint64_t salt = 0, bool allow_same_round_chaining = false);

  /// Appends a block under `parent`. Throws StructuralError for an unknown
  /// parent and OrderingError when `round` does not follow the parent's.
  BlockId extend(BlockId parent, NodeIndex miner, std::uint32_t round, bool honest,
                 std::uint32_t vdf_round);

  [[nodiscard]] bool contains(BlockId id) const noexcept { return id.value < blocks_.size(); }
  [[nodiscard]] const Block& at(BlockId id) const;
  [[nodiscard]] const Block& operator[](BlockId id) const noexcept { return blocks_[id.value]; }
  [[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
  [[nodiscard]] std::uint32_t length(BlockId id) const noexcept { return blocks_[id.value].depth + 1; }
  [[nodiscard]] Chain chain(BlockId tip) const { return Chain{tip, at(tip).depth + 1}; }
  [[nodiscard]] std::span<const BlockId> children(BlockId id) const;
  [[nodiscard]] std::span<const Block> blocks() const noexcept { return blocks_; }
  [[nodiscard]] bool same_round_chaining() const noexcept { return same_round_; }
  [[nodiscard]] std::uint64_t salt() const noexcept { return salt_; }

  /// Ancestor of `id` at the given depth (depth <= depth(id)).
  [[nodiscard]] BlockId ancestor_at_depth(BlockId id, std::uint32_t depth) const;
  [[nodiscard]] bool is_ancestor_or_self(BlockId ancestor, BlockId descendant) const;

  /// Digest a block would get; lets an adversary grind before committing.
  [[nodiscard]] std::uint64_t preview_digest(BlockId parent, NodeIndex miner, std::uint32_t round,
                                             std::uint32_t vdf_round) const;

 private:
  std::uint64_t salt_;
  bool same_round_;
  std::vector<Block> blocks_;
  std::vector<std::vector<BlockId>> children_;
};

struct PrefixReport {
  std::uint32_t common_prefix_len = 1;
  std::uint32_t max_inconsistency = 0;
  BlockId prefix_tip = kGenesis;
};

/// Deepest common ancestor-or-self of all tips and the largest distance of
/// any tip beyond it. Throws ArgumentError on an empty set and
/// StructuralError on an unknown tip.
PrefixReport common_prefix(const BlockStore& store, std::span<const BlockId> tips);

/// The tips of maximal length, deduplicated, in input order.
std::vector<BlockId> longest_tips(const BlockStore& store, std::span<const BlockId> tips);

/// Honest fraction of the non-genesis blocks on genesis..tip; 1 when the
/// chain is genesis alone.
double honest_fraction(const BlockStore& store, BlockId tip);

}  // namespace nakasim

template <>
struct std::hash<nakasim::BlockId> {
  std::size_t operator()(nakasim::BlockId id) const noexcept { return id.value; }
};
