#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nakasim/adversary.hpp"
#include "nakasim/bounds.hpp"
#include "nakasim/chain.hpp"
#include "nakasim/config.hpp"
#include "nakasim/rng.hpp"
#include "nakasim/vdf.hpp"

namespace nakasim {

/// Rank offsets: adversary deliveries use small ranks, honest broadcasts
/// follow in node order, then same-round relays.
inline constexpr std::uint32_t kBroadcastRankBase = 1u << 24;
inline constexpr std::uint32_t kRelayRankBase = 1u << 25;

struct WorldState {
  WorldState(BlockStore s, VdfChainState v) : store(std::move(s)), vdf(std::move(v)) {}

  std::uint32_t round = 0;
  BlockStore store;
  std::vector<Chain> local_tip;  // one per node; corrupt slots only move under AdversaryTag::kNone
  std::vector<Delivery> broadcasts;            // protocol broadcasts from the previous round
  std::vector<Delivery> public_inbox;          // adversary releases to every honest node
  std::vector<std::vector<Delivery>> inbox;    // adversary releases to single nodes
  VdfChainState vdf;
  std::uint32_t vdf_clock = 0;
  AdvantageProcess advantage;
  OpportunityWalk opportunity;
  bool last_nonempty_honest_only = false;
  std::uint32_t honest_max_len = 1;
  std::uint32_t adv_max_len = 1;
};

/// Per-round record; the CSV trace columns plus audit fields.
struct RoundRecord {
  std::uint32_t t = 0;
  std::uint32_t nb = 0;
  std::uint32_t ab = 0;
  PrefixReport prefix;
  std::uint32_t advantage = 0;    // N(t)
  std::int64_t opportunity = 0;   // J(m) after this round
  std::uint64_t nonempty = 0;     // m
  std::uint32_t honest_max_len = 1;
  std::uint32_t honest_min_len = 1;
  std::uint32_t adv_max_len = 1;  // longest chain in the store acceptable to honest nodes
  std::uint32_t rejected = 0;
  bool assumption_fallback = false;
  bool lead_violation = false;      // adv_max_len > honest_max_len + N(t)
  bool spread_violation = false;    // b = 0 and honest lengths differ by more than 1
  bool growth_violation = false;    // relay on: honest max shrank, or failed to grow when NB > 0
  bool length_violation = false;    // vdf on: some acceptable chain longer than t + 1
};

struct ReleaseLogEntry {
  std::uint32_t round = 0;
  NodeIndex target = -1;  // -1: every honest node
  BlockId tip;
  std::uint32_t length = 0;
  std::uint32_t rank = 0;
};

struct RejectLogEntry {
  std::uint32_t round = 0;  // round of receipt
  BlockId tip;
  VdfVerdict verdict = VdfVerdict::kAccept;
  BlockId offender;
};

struct TraceSummary {
  std::uint32_t rounds = 0;
  std::uint32_t final_prefix_len = 1;
  std::uint32_t final_inconsistency = 0;
  std::uint32_t peak_inconsistency = 0;
  double prefix_growth_rate = 0;  // (final_prefix_len - 1) / T
  double chain_quality = 1;       // honest share of the final common prefix
  std::uint32_t pair_inconsistency = 0;  // honest nodes 0 and 1 at the end
  std::uint32_t honest_max_len = 1;
  std::uint32_t adv_max_len = 1;
  std::uint32_t advantage_final = 0;
  std::uint32_t advantage_peak = 0;
  std::int64_t opportunity_final = 0;
  std::uint64_t nonempty_rounds = 0;
  std::uint64_t lead_violations = 0;
  std::uint64_t spread_violations = 0;
  std::uint64_t growth_violations = 0;
  std::uint64_t length_violations = 0;
  std::uint64_t fallback_rounds = 0;
  std::uint64_t rejected = 0;
};

struct ProcessTrace {
  SimConfig cfg;
  std::vector<RoundRecord> rounds;
  std::vector<ReleaseLogEntry> releases;
  std::vector<RejectLogEntry> rejects;
  std::vector<BlockId> final_tips;  // honest nodes, in node order
  TraceSummary summary;
};

struct RunOptions {
  bool keep_rounds = true;
  bool keep_logs = true;
};

/// One replica. Streams for mining, tie-breaking and the adversary are
/// spawned from cfg.seed, so the mining realization does not depend on
/// the strategy or the adversary.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg, RunOptions opts = {});
  Simulation(const SimConfig& cfg, std::unique_ptr<Adversary> adversary, RunOptions opts = {});
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Executes round state().round + 1. Throws ContractViolation past T.
  const RoundRecord& step();
  [[nodiscard]] bool done() const noexcept { return state_.round >= cfg_.T; }
  /// Steps to T and returns the trace (moved out; call once).
  ProcessTrace finish();

  [[nodiscard]] const SimConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const WorldState& state() const noexcept { return state_; }
  [[nodiscard]] const Adversary& adversary() const noexcept { return *adversary_; }
  [[nodiscard]] const ProcessTrace& trace() const noexcept { return trace_; }
  [[nodiscard]] std::vector<BlockId> honest_tips() const;

 private:
  void adopt(std::uint32_t node, std::span<const Delivery> targeted);
  void refresh_pool();
  void finalize_summary();

  SimConfig cfg_;
  RunOptions opts_;
  WorldState state_;
  std::unique_ptr<Adversary> adversary_;
  VdfValidator validator_;
  RandomStream mining_;
  RandomStream strategy_;
  RandomStream adversary_rng_;
  std::uint64_t coin_key_;
  std::uint32_t followers_;  // nodes running the protocol: honest ones, plus corrupt under kNone

  // Per-round scratch.
  std::vector<Delivery> pool_;          // broadcasts + public releases + relays, distinct tips
  std::vector<Candidate> pool_longest_;
  std::uint32_t pool_len_ = 0;
  std::vector<std::uint32_t> pool_mark_;  // block id -> round stamp when in pool_longest_
  std::vector<Candidate> scratch_;
  std::optional<Chain> cached_choice_;
  std::vector<std::uint32_t> tip_mark_;

  RoundRecord current_;
  ProcessTrace trace_;
};

ProcessTrace run(const SimConfig& cfg, RunOptions opts = {});

}  // namespace nakasim
