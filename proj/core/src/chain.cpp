#include "nakasim/chain.hpp"

#include <algorithm>
#include <string>

#include "nakasim/errors.hpp"
#include "nakasim/rng.hpp"

namespace nakasim {

BlockStore::BlockStore(std::uint64_t salt, bool allow_same_round_chaining)
    : salt_(salt), same_round_(allow_same_round_chaining) {
  Block genesis;
  genesis.id = kGenesis;
  genesis.digest = mix_all({salt_, 0});
  blocks_.push_back(genesis);
  children_.emplace_back();
}

std::uint64_t BlockStore::preview_digest(BlockId parent, NodeIndex miner, std::uint32_t round,
                                         std::uint32_t vdf_round) const {
  return mix_all({salt_, at(parent).digest, static_cast<std::uint64_t>(miner) + 1, round,
                  vdf_round});
}

BlockId BlockStore::extend(BlockId parent, NodeIndex miner, std::uint32_t round, bool honest,
                           std::uint32_t vdf_round) {
  if (!contains(parent)) {
    throw StructuralError("extend: unknown parent block " + std::to_string(parent.value));
  }
  const Block& p = blocks_[parent.value];
  const bool ordered = same_round_ ? round >= p.round : round > p.round;
  if (!ordered || round == 0) {
    throw OrderingError("extend: round " + std::to_string(round) + " does not follow parent round " +
                        std::to_string(p.round));
  }
  Block b;
  b.id = BlockId{static_cast<std::uint32_t>(blocks_.size())};
  b.parent = parent;
  b.miner = miner;
  b.round = round;
  b.honest = honest;
  b.vdf_round = vdf_round;
  b.depth = p.depth + 1;
  b.honest_in_chain = p.honest_in_chain + (honest ? 1u : 0u);
  b.digest = preview_digest(parent, miner, round, vdf_round);
  children_[parent.value].push_back(b.id);
  blocks_.push_back(b);
  children_.emplace_back();
  return b.id;
}

const Block& BlockStore::at(BlockId id) const {
  if (!contains(id)) throw StructuralError("unknown block " + std::to_string(id.value));
  return blocks_[id.value];
}

std::span<const BlockId> BlockStore::children(BlockId id) const {
  if (!contains(id)) throw StructuralError("unknown block " + std::to_string(id.value));
  return children_[id.value];
}

BlockId BlockStore::ancestor_at_depth(BlockId id, std::uint32_t depth) const {
  const Block* b = &at(id);
  if (depth > b->depth) throw ArgumentError("ancestor_at_depth: depth beyond block");
  while (b->depth > depth) b = &blocks_[b->parent->value];
  return b->id;
}

bool BlockStore::is_ancestor_or_self(BlockId ancestor, BlockId descendant) const {
  const Block& a = at(ancestor);
  const Block& d = at(descendant);
  if (a.depth > d.depth) return false;
  return ancestor_at_depth(descendant, a.depth) == ancestor;
}

PrefixReport common_prefix(const BlockStore& store, std::span<const BlockId> tips) {
  if (tips.empty()) throw ArgumentError("common_prefix: empty tip set");
  std::vector<BlockId> cursor(tips.begin(), tips.end());
  std::uint32_t min_depth = UINT32_MAX;
  std::uint32_t max_depth = 0;
  for (BlockId t : cursor) {
    const std::uint32_t d = store.at(t).depth;
    min_depth = std::min(min_depth, d);
    max_depth = std::max(max_depth, d);
  }
  for (BlockId& c : cursor) c = store.ancestor_at_depth(c, min_depth);

  // Climb level by level, merging cursors that meet.
  auto merge = [&] {
    std::sort(cursor.begin(), cursor.end());
    cursor.erase(std::unique(cursor.begin(), cursor.end()), cursor.end());
  };
  merge();
  while (cursor.size() > 1) {
    for (BlockId& c : cursor) c = *store[c].parent;
    merge();
  }
  PrefixReport r;
  r.prefix_tip = cursor.front();
  r.common_prefix_len = store[r.prefix_tip].depth + 1;
  r.max_inconsistency = max_depth - store[r.prefix_tip].depth;
  return r;
}

std::vector<BlockId> longest_tips(const BlockStore& store, std::span<const BlockId> tips) {
  if (tips.empty()) throw ArgumentError("longest_tips: empty candidate set");
  std::uint32_t best = 0;
  for (BlockId t : tips) best = std::max(best, store.at(t).depth);
  std::vector<BlockId> out;
  for (BlockId t : tips) {
    if (store[t].depth == best && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

double honest_fraction(const BlockStore& store, BlockId tip) {
  const Block& b = store.at(tip);
  if (b.depth == 0) return 1.0;
  return static_cast<double>(b.honest_in_chain) / static_cast<double>(b.depth);
}

}  // namespace nakasim
