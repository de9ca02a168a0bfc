#include "nakasim/vdf.hpp"

#include <algorithm>
#include <string>

#include "nakasim/errors.hpp"
#include "nakasim/rng.hpp"

namespace nakasim {

namespace {

constexpr BlockId kNone{UINT32_MAX};

std::uint64_t vdf_eval(std::uint64_t key, std::uint64_t x) { return mix_all({key, 0x564446, x}); }

}  // namespace

VdfChainState::VdfChainState(std::uint64_t key) : key_(key) {
  outputs_.push_back(VdfToken{vdf_eval(key_, 0), 0});
}

void VdfChainState::advance_to(std::uint32_t round) {
  while (current_round() < round) {
    const VdfToken& last = outputs_.back();
    outputs_.push_back(VdfToken{vdf_eval(key_, last.digest), last.round + 1});
  }
}

const VdfToken& VdfChainState::output(std::uint32_t round) const {
  if (round > current_round()) {
    throw FutureOutputError("vdf output for round " + std::to_string(round) +
                            " requested at round " + std::to_string(current_round()));
  }
  return outputs_[round];
}

std::string_view to_string(VdfVerdict v) noexcept {
  switch (v) {
    case VdfVerdict::kAccept: return "accept";
    case VdfVerdict::kNotIncreasing: return "not-increasing";
    case VdfVerdict::kTooEarly: return "too-early";
    case VdfVerdict::kFutureOutput: return "future-output";
    case VdfVerdict::kDuplicate: return "duplicate";
  }
  return "?";
}

VdfCheck validate_chain(const BlockStore& store, BlockId tip, std::uint32_t round) {
  std::vector<const Block*> path;
  for (const Block* b = &store.at(tip); b->parent; b = &store[*b->parent]) path.push_back(b);
  std::reverse(path.begin(), path.end());  // path[k-1] is the k-th block

  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i]->vdf_round < path[i - 1]->vdf_round) return {VdfVerdict::kNotIncreasing, path[i]->id};
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i]->vdf_round < i) return {VdfVerdict::kTooEarly, path[i]->id};
  }
  for (const Block* b : path) {
    if (round == 0 || b->vdf_round > round - 1) return {VdfVerdict::kFutureOutput, b->id};
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      if (path[i]->vdf_round == path[j]->vdf_round) return {VdfVerdict::kDuplicate, path[j]->id};
    }
  }
  return {};
}

const VdfValidator::Summary& VdfValidator::summary(BlockId id) {
  if (cache_.empty()) cache_.push_back(Summary{});  // genesis: nothing to check
  if (id.value < cache_.size()) return cache_[id.value];
  // Fill in creation order; parents always precede children.
  const std::size_t target = id.value;
  cache_.reserve(store_->size());
  while (cache_.size() <= target) {
    const Block& b = (*store_)[BlockId{static_cast<std::uint32_t>(cache_.size())}];
    const Summary& ps = cache_[b.parent->value];
    const Block& parent = (*store_)[*b.parent];
    Summary s = ps;
    if (b.depth >= 2) {
      if (s.decrease == kNone && b.vdf_round < parent.vdf_round) s.decrease = b.id;
      if (s.duplicate == kNone && b.vdf_round == parent.vdf_round) s.duplicate = b.id;
    }
    if (s.too_early == kNone && b.vdf_round + 1 < b.depth) s.too_early = b.id;
    if (b.depth == 1 || b.vdf_round > s.max_round) {
      s.max_round = b.vdf_round;
      s.max_block = b.id;
    }
    cache_.push_back(s);
  }
  return cache_[target];
}

VdfCheck VdfValidator::check(BlockId tip, std::uint32_t round) {
  (void)store_->at(tip);
  const Summary& s = summary(tip);
  if (s.decrease != kNone) return {VdfVerdict::kNotIncreasing, s.decrease};
  if (s.too_early != kNone) return {VdfVerdict::kTooEarly, s.too_early};
  if (tip != kGenesis && (round == 0 || s.max_round > round - 1)) {
    // Rounds are non-decreasing here, so the first block over the limit
    // is the first one at or above it.
    BlockId first = s.max_block;
    const std::uint32_t limit = round == 0 ? 0 : round - 1;
    for (BlockId c = s.max_block; c != kGenesis; c = *(*store_)[c].parent) {
      if (round != 0 && (*store_)[c].vdf_round <= limit) break;
      first = c;
    }
    return {VdfVerdict::kFutureOutput, first};
  }
  if (s.duplicate != kNone) {
    // Non-adjacent duplicates need a decrease, so the adjacent one is first.
    return {VdfVerdict::kDuplicate, s.duplicate};
  }
  return {};
}

}  // namespace nakasim
