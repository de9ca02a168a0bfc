#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nakasim/chain.hpp"
#include "nakasim/config.hpp"
#include "nakasim/rng.hpp"
#include "nakasim/vdf.hpp"

namespace nakasim {

/// A chain announcement waiting in an inbox. Lower rank arrives first;
/// rank 0 is reserved for the receiver's own tip.
struct Delivery {
  BlockId tip = kGenesis;
  std::uint32_t rank = 1;
};

/// Adversary releases for the next round.
struct ReleasePlan {
  std::vector<Delivery> to_all;  // every honest node
  struct Targeted {
    NodeIndex node;
    Delivery delivery;
  };
  std::vector<Targeted> targeted;
  [[nodiscard]] bool empty() const noexcept { return to_all.empty() && targeted.empty(); }
};

/// What the adversary sees during round `round`, after honest mining
/// (rushing): the shared store, every honest node's adopted tip, the
/// honest blocks just mined, and the process history.
struct AdversaryView {
  const SimConfig* cfg = nullptr;
  BlockStore* store = nullptr;
  const VdfChainState* vdf = nullptr;  // null unless vdf_mode
  std::uint32_t round = 0;
  std::span<const Chain> adopted;       // honest tips mined on this round
  std::span<const BlockId> honest_new;  // honest blocks mined this round
  std::uint32_t honest_max_len = 1;     // after honest mining
  std::uint32_t advantage_prev = 0;     // N(round-1)
  bool last_nonempty_honest_only = false;

  /// VDF round embedded in blocks mined now: round-1 (the freshest output).
  [[nodiscard]] std::uint32_t fresh_vdf_round() const;
};

class Adversary {
 public:
  virtual ~Adversary() = default;

  /// True for the honest-equivalent baseline: the engine then runs corrupt
  /// nodes through the ordinary protocol.
  [[nodiscard]] virtual bool follows_protocol() const noexcept { return false; }

  /// Attaches this round's corrupt successes (node indices, ascending).
  virtual void on_corrupt_mine(std::span<const NodeIndex> successes, AdversaryView& view,
                               RandomStream& rng) = 0;

  /// Releases for delivery at the start of the next round.
  virtual ReleasePlan plan_releases(AdversaryView& view, RandomStream& rng) = 0;

  [[nodiscard]] const std::vector<Chain>& private_tips() const noexcept { return private_; }
  /// True when this round's base choice hit the assumption trigger with no
  /// honest-ended longest chain available.
  [[nodiscard]] bool fallback_this_round() const noexcept { return fallback_; }

 protected:
  /// Longest chain among private and adopted tips. When the trigger holds
  /// (N(t-1) = 0 and the last nonempty round was honest-only) the choice is
  /// uniform over longest chains ending in an honest block, falling back to
  /// all longest chains. Otherwise private tips win ties.
  Chain select_base(AdversaryView& view, RandomStream& rng);
  BlockId mine_on(AdversaryView& view, BlockId parent, NodeIndex miner);

  std::vector<Chain> private_;
  bool fallback_ = false;
};

std::unique_ptr<Adversary> make_adversary(AdversaryTag tag);

/// Releases whatever a callback builds; used by tests to inject
/// hand-made chains.
class ScriptedAdversary final : public Adversary {
 public:
  using Script = std::function<ReleasePlan(AdversaryView&, RandomStream&)>;
  explicit ScriptedAdversary(Script script) : script_(std::move(script)) {}
  void on_corrupt_mine(std::span<const NodeIndex>, AdversaryView&, RandomStream&) override {}
  ReleasePlan plan_releases(AdversaryView& view, RandomStream& rng) override {
    return script_ ? script_(view, rng) : ReleasePlan{};
  }

 private:
  Script script_;
};

}  // namespace nakasim
