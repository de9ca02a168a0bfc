#include "nakasim/engine.hpp"

#include <algorithm>

#include "nakasim/errors.hpp"

namespace nakasim {

namespace {

constexpr std::uint64_t kVdfKeyTag = 0x564446;   // "VDF"
constexpr std::uint64_t kCoinKeyTag = 0x434f494e;  // "COIN"

void ensure_size(std::vector<std::uint32_t>& v, std::size_t n) {
  if (v.size() < n) v.resize(n + n / 2 + 16, 0);
}

}  // namespace

Simulation::Simulation(const SimConfig& cfg, RunOptions opts)
    : Simulation(cfg, nullptr, opts) {}

Simulation::Simulation(const SimConfig& cfg, std::unique_ptr<Adversary> adversary, RunOptions opts)
    : cfg_((cfg.validate(), cfg)),
      opts_(opts),
      state_(BlockStore(mix_all({cfg.seed, static_cast<std::uint64_t>(StreamTag::kSalt)}), !cfg.vdf_mode),
             VdfChainState(mix_all({cfg.seed, kVdfKeyTag}))),
      adversary_(adversary ? std::move(adversary) : make_adversary(cfg.adversary)),
      validator_(state_.store),
      mining_(cfg.seed, StreamTag::kMining),
      strategy_(cfg.seed, StreamTag::kStrategy),
      adversary_rng_(cfg.seed, StreamTag::kAdversary),
      coin_key_(mix_all({cfg.seed, kCoinKeyTag})),
      followers_(adversary_->follows_protocol() ? cfg.n : cfg.honest_count()) {
  state_.local_tip.assign(cfg_.n, Chain{});
  state_.inbox.assign(cfg_.honest_count(), {});
  trace_.cfg = cfg_;
  if (opts_.keep_rounds) trace_.rounds.reserve(cfg_.T);
}

std::vector<BlockId> Simulation::honest_tips() const {
  std::vector<BlockId> tips;
  tips.reserve(cfg_.honest_count());
  for (std::uint32_t i = 0; i < cfg_.honest_count(); ++i) tips.push_back(state_.local_tip[i].tip);
  return tips;
}

void Simulation::refresh_pool() {
  std::sort(pool_.begin(), pool_.end(), [](const Delivery& a, const Delivery& b) {
    return a.tip != b.tip ? a.tip < b.tip : a.rank < b.rank;
  });
  pool_.erase(std::unique(pool_.begin(), pool_.end(),
                          [](const Delivery& a, const Delivery& b) { return a.tip == b.tip; }),
              pool_.end());
  std::sort(pool_.begin(), pool_.end(),
            [](const Delivery& a, const Delivery& b) { return a.rank < b.rank; });
  pool_len_ = 0;
  for (const Delivery& d : pool_) pool_len_ = std::max(pool_len_, state_.store.length(d.tip));
  pool_longest_.clear();
  ensure_size(pool_mark_, state_.store.size());
  for (const Delivery& d : pool_) {
    if (state_.store.length(d.tip) == pool_len_) {
      pool_longest_.push_back(Candidate{Chain{d.tip, pool_len_}, d.rank});
      pool_mark_[d.tip.value] = state_.round + 1;
    }
  }
  cached_choice_.reset();
}

void Simulation::adopt(std::uint32_t node, std::span<const Delivery> targeted) {
  const std::uint32_t t = state_.round + 1;
  Chain& own = state_.local_tip[node];
  const ChoiceContext ctx{&state_.store, coin_key_, t};
  const bool deterministic =
      cfg_.strategy == StrategyTag::kLexFirst || cfg_.strategy == StrategyTag::kGlobalCoin;

  if (targeted.empty()) {
    if (pool_longest_.empty() || own.length > pool_len_) return;
    const bool own_in_pool = pool_mark_[own.tip.value] == t;
    if (own.length < pool_len_ || own_in_pool) {
      if (own_in_pool && cfg_.strategy == StrategyTag::kFirstSeen) return;
      if (deterministic) {
        if (!cached_choice_) {
          cached_choice_ = detail::choose_unchecked(cfg_.strategy, pool_longest_, strategy_, ctx);
        }
        own = *cached_choice_;
        return;
      }
      own = detail::choose_unchecked(cfg_.strategy, pool_longest_, strategy_, ctx);
      return;
    }
  }

  std::uint32_t best = std::max(own.length, pool_len_);
  for (const Delivery& d : targeted) best = std::max(best, state_.store.length(d.tip));
  scratch_.clear();
  if (own.length == best) scratch_.push_back(Candidate{own, 0});
  auto add = [&](BlockId tip, std::uint32_t rank) {
    for (Candidate& c : scratch_) {
      if (c.chain.tip == tip) {
        c.rank = std::min(c.rank, rank);
        return;
      }
    }
    scratch_.push_back(Candidate{Chain{tip, best}, rank});
  };
  if (pool_len_ == best) {
    for (const Candidate& c : pool_longest_) add(c.chain.tip, c.rank);
  }
  for (const Delivery& d : targeted) {
    if (state_.store.length(d.tip) == best) add(d.tip, d.rank);
  }
  own = detail::choose_unchecked(cfg_.strategy, scratch_, strategy_, ctx);
}

const RoundRecord& Simulation::step() {
  if (done()) throw ContractViolation("Simulation::step: horizon reached");
  const std::uint32_t t = state_.round + 1;
  const std::uint32_t h = cfg_.honest_count();
  BlockStore& store = state_.store;
  const std::size_t blocks_before = store.size();
  const std::uint32_t prev_honest_max = state_.honest_max_len;
  current_ = RoundRecord{};
  current_.t = t;
  if (cfg_.vdf_mode) {
    state_.vdf.advance_to(t - 1);
    state_.vdf_clock = t - 1;
  }

  // Honest validation of adversary deliveries.
  auto keep = [&](const Delivery& d) {
    if (!cfg_.vdf_mode) return true;
    const VdfCheck c = validator_.check(d.tip, t);
    if (c.accepted()) return true;
    ++current_.rejected;
    if (opts_.keep_logs) trace_.rejects.push_back(RejectLogEntry{t, d.tip, c.verdict, c.offender});
    return false;
  };
  std::erase_if(state_.public_inbox, [&](const Delivery& d) { return !keep(d); });
  for (auto& box : state_.inbox) std::erase_if(box, [&](const Delivery& d) { return !keep(d); });

  // Shared deliveries, plus relays of strictly longer targeted chains.
  pool_.assign(state_.broadcasts.begin(), state_.broadcasts.end());
  pool_.insert(pool_.end(), state_.public_inbox.begin(), state_.public_inbox.end());
  if (cfg_.selective_relay) {
    for (std::uint32_t i = 0; i < h; ++i) {
      for (const Delivery& d : state_.inbox[i]) {
        if (store.length(d.tip) > state_.local_tip[i].length) {
          pool_.push_back(Delivery{d.tip, kRelayRankBase + i});
        }
      }
    }
  }
  refresh_pool();

  for (std::uint32_t i = 0; i < followers_; ++i) {
    adopt(i, i < h ? std::span<const Delivery>(state_.inbox[i]) : std::span<const Delivery>{});
  }
  const std::vector<Chain> adopted(state_.local_tip.begin(), state_.local_tip.begin() + h);

  // Mining, in node order from the mining stream alone.
  std::vector<BlockId> honest_new;
  std::vector<NodeIndex> corrupt_successes;
  std::vector<Delivery> next_broadcasts;
  for (std::uint32_t i = 0; i < cfg_.n; ++i) {
    const bool success = cfg_.p >= 1.0 ? true : cfg_.p <= 0.0 ? false : mining_.bernoulli(cfg_.p);
    if (!success) continue;
    const bool honest = i < h;
    ++(honest ? current_.nb : current_.ab);
    if (i < followers_) {
      const BlockId id = store.extend(state_.local_tip[i].tip, static_cast<NodeIndex>(i), t, honest, t - 1);
      state_.local_tip[i] = store.chain(id);
      next_broadcasts.push_back(Delivery{id, kBroadcastRankBase + i});
      if (honest) honest_new.push_back(id);
    } else {
      corrupt_successes.push_back(static_cast<NodeIndex>(i));
    }
  }

  std::uint32_t honest_max = 1;
  std::uint32_t honest_min = UINT32_MAX;
  for (std::uint32_t i = 0; i < h; ++i) {
    honest_max = std::max(honest_max, state_.local_tip[i].length);
    honest_min = std::min(honest_min, state_.local_tip[i].length);
  }

  AdversaryView view;
  view.cfg = &cfg_;
  view.store = &store;
  view.vdf = cfg_.vdf_mode ? &state_.vdf : nullptr;
  view.round = t;
  view.adopted = adopted;
  view.honest_new = honest_new;
  view.honest_max_len = honest_max;
  view.advantage_prev = state_.advantage.value();
  view.last_nonempty_honest_only = state_.last_nonempty_honest_only;
  adversary_->on_corrupt_mine(corrupt_successes, view, adversary_rng_);
  ReleasePlan plan = adversary_->plan_releases(view, adversary_rng_);
  current_.assumption_fallback = adversary_->fallback_this_round();

  state_.broadcasts = std::move(next_broadcasts);
  state_.public_inbox = std::move(plan.to_all);
  for (auto& box : state_.inbox) box.clear();
  for (const ReleasePlan::Targeted& tg : plan.targeted) {
    if (tg.node < 0 || static_cast<std::uint32_t>(tg.node) >= h) {
      throw ContractViolation("release targets a node that is not honest");
    }
    state_.inbox[tg.node].push_back(tg.delivery);
  }
  if (opts_.keep_logs) {
    for (const Delivery& d : state_.public_inbox) {
      trace_.releases.push_back(ReleaseLogEntry{t, -1, d.tip, store.length(d.tip), d.rank});
    }
    for (const ReleasePlan::Targeted& tg : plan.targeted) {
      trace_.releases.push_back(
          ReleaseLogEntry{t, tg.node, tg.delivery.tip, store.length(tg.delivery.tip), tg.delivery.rank});
    }
  }

  // Processes and metrics.
  current_.advantage = state_.advantage.update(current_.nb, current_.ab);
  if (current_.nb + current_.ab > 0) {
    state_.opportunity.update(current_.nb, current_.ab);
    state_.last_nonempty_honest_only = current_.ab == 0;
  }
  current_.opportunity = state_.opportunity.value();
  current_.nonempty = state_.opportunity.steps();

  ensure_size(tip_mark_, store.size());
  std::vector<BlockId> distinct;
  for (std::uint32_t i = 0; i < h; ++i) {
    const BlockId tip = state_.local_tip[i].tip;
    if (tip_mark_[tip.value] != t) {
      tip_mark_[tip.value] = t;
      distinct.push_back(tip);
    }
  }
  current_.prefix = common_prefix(store, distinct);

  std::uint32_t adv_max = state_.adv_max_len;
  for (std::size_t id = blocks_before; id < store.size(); ++id) {
    const BlockId b{static_cast<std::uint32_t>(id)};
    if (!cfg_.vdf_mode || validator_.check(b, t).accepted()) adv_max = std::max(adv_max, store.length(b));
  }
  state_.adv_max_len = adv_max;
  state_.honest_max_len = honest_max;
  current_.honest_max_len = honest_max;
  current_.honest_min_len = honest_min;
  current_.adv_max_len = adv_max;
  current_.lead_violation = adv_max > honest_max + current_.advantage;
  current_.spread_violation = cfg_.b == 0 && honest_max - honest_min > 1;
  current_.growth_violation = cfg_.selective_relay && cfg_.b > 0 &&
                              (honest_max < prev_honest_max || (current_.nb > 0 && honest_max < prev_honest_max + 1));
  current_.length_violation = cfg_.vdf_mode && (adv_max > t + 1 || honest_max > t + 1);

  TraceSummary& s = trace_.summary;
  s.peak_inconsistency = std::max(s.peak_inconsistency, current_.prefix.max_inconsistency);
  s.advantage_peak = std::max(s.advantage_peak, current_.advantage);
  s.lead_violations += current_.lead_violation;
  s.spread_violations += current_.spread_violation;
  s.growth_violations += current_.growth_violation;
  s.length_violations += current_.length_violation;
  s.fallback_rounds += current_.assumption_fallback;
  s.rejected += current_.rejected;

  state_.round = t;
  if (opts_.keep_rounds) trace_.rounds.push_back(current_);
  return current_;
}

void Simulation::finalize_summary() {
  TraceSummary& s = trace_.summary;
  trace_.final_tips = honest_tips();
  const PrefixReport r = common_prefix(state_.store, trace_.final_tips);
  s.rounds = state_.round;
  s.final_prefix_len = r.common_prefix_len;
  s.final_inconsistency = r.max_inconsistency;
  s.prefix_growth_rate =
      state_.round == 0 ? 0.0 : static_cast<double>(r.common_prefix_len - 1) / state_.round;
  s.chain_quality = honest_fraction(state_.store, r.prefix_tip);
  if (trace_.final_tips.size() >= 2) {
    const BlockId pair[2] = {trace_.final_tips[0], trace_.final_tips[1]};
    s.pair_inconsistency = common_prefix(state_.store, pair).max_inconsistency;
  }
  s.honest_max_len = state_.honest_max_len;
  s.adv_max_len = state_.adv_max_len;
  s.advantage_final = state_.advantage.value();
  s.opportunity_final = state_.opportunity.value();
  s.nonempty_rounds = state_.opportunity.steps();
}

ProcessTrace Simulation::finish() {
  while (!done()) step();
  finalize_summary();
  return std::move(trace_);
}

ProcessTrace run(const SimConfig& cfg, RunOptions opts) {
  Simulation sim(cfg, opts);
  return sim.finish();
}

}  // namespace nakasim
