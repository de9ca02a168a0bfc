#include "nakasim/adversary.hpp"

#include <algorithm>

#include "nakasim/errors.hpp"

namespace nakasim {

std::uint32_t AdversaryView::fresh_vdf_round() const {
  const std::uint32_t r = round == 0 ? 0 : round - 1;
  if (vdf != nullptr) (void)vdf->output(r);  // the clock must already hold it
  return r;
}

namespace {

std::vector<Chain> distinct_longest(std::span<const Chain> a, std::span<const Chain> b) {
  std::uint32_t best = 0;
  for (const Chain& c : a) best = std::max(best, c.length);
  for (const Chain& c : b) best = std::max(best, c.length);
  std::vector<Chain> out;
  auto add = [&](const Chain& c) {
    if (c.length == best && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  for (const Chain& c : a) add(c);
  for (const Chain& c : b) add(c);
  return out;
}

template <class T>
const T& pick(const std::vector<T>& v, RandomStream& rng) {
  return v.size() == 1 ? v.front() : v[rng.uniform_index(v.size())];
}

// Random half of the honest nodes (size floor(h/2)), as a membership mask.
std::vector<bool> random_half(std::uint32_t h, RandomStream& rng) {
  std::vector<std::uint32_t> idx(h);
  for (std::uint32_t i = 0; i < h; ++i) idx[i] = i;
  for (std::uint32_t i = h; i > 1; --i) std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
  std::vector<bool> mask(h, false);
  for (std::uint32_t i = 0; i < h / 2; ++i) mask[idx[i]] = true;
  return mask;
}

class ProtocolFollower final : public Adversary {
 public:
  [[nodiscard]] bool follows_protocol() const noexcept override { return true; }
  void on_corrupt_mine(std::span<const NodeIndex>, AdversaryView&, RandomStream&) override {}
  ReleasePlan plan_releases(AdversaryView&, RandomStream&) override { return {}; }
};

void release_if_competitive(const std::vector<Chain>& tips, const AdversaryView& view, ReleasePlan& plan) {
  if (!tips.empty() && tips.front().length >= view.honest_max_len) {
    plan.to_all.push_back(Delivery{tips.front().tip, 1});
  }
}

class PrivateChain final : public Adversary {
 public:
  void on_corrupt_mine(std::span<const NodeIndex> successes, AdversaryView& view,
                       RandomStream& rng) override {
    fallback_ = false;
    if (successes.empty()) return;
    const Chain base = select_base(view, rng);
    BlockId tip = base.tip;
    // Without the gate every success lands on the same chain this round.
    const std::size_t count = view.cfg->vdf_mode ? 1 : successes.size();
    for (std::size_t i = 0; i < count; ++i) tip = mine_on(view, tip, successes[i]);
    private_.assign(1, view.store->chain(tip));
  }

  ReleasePlan plan_releases(AdversaryView& view, RandomStream&) override {
    ReleasePlan plan;
    release_if_competitive(private_, view, plan);
    return plan;
  }
};

// P extends the base; with a second success a shorter decoy forks below it.
// Unequal lengths go to disjoint halves of the honest nodes.
class SelectiveRelease final : public Adversary {
 public:
  void on_corrupt_mine(std::span<const NodeIndex> successes, AdversaryView& view,
                       RandomStream& rng) override {
    fallback_ = false;
    decoy_.reset();
    if (successes.empty()) return;
    const Chain base = select_base(view, rng);
    private_.assign(1, view.store->chain(mine_on(view, base.tip, successes[0])));
    if (successes.size() >= 2) {
      // Decoy one block short of P: a sibling of the base's tip.
      const auto below = (*view.store)[base.tip].parent;
      decoy_ = view.store->chain(mine_on(view, below.value_or(base.tip), successes[1]));
    }
  }

  ReleasePlan plan_releases(AdversaryView& view, RandomStream& rng) override {
    ReleasePlan plan;
    if (private_.empty() || private_.front().length < view.honest_max_len) return plan;
    const std::uint32_t h = view.cfg->honest_count();
    const std::vector<bool> half = random_half(h, rng);
    const Chain p = private_.front();
    if (decoy_ && decoy_->length != p.length) {
      const Chain longer = decoy_->length > p.length ? *decoy_ : p;
      const Chain shorter = decoy_->length > p.length ? p : *decoy_;
      for (std::uint32_t i = 0; i < h; ++i) {
        plan.targeted.push_back({static_cast<NodeIndex>(i), Delivery{(half[i] ? longer : shorter).tip, 1}});
      }
      return plan;
    }
    for (std::uint32_t i = 0; i < h; ++i) {
      if (half[i]) plan.targeted.push_back({static_cast<NodeIndex>(i), Delivery{p.tip, 1}});
    }
    return plan;
  }

 private:
  std::optional<Chain> decoy_;
};

class LexGrind final : public Adversary {
 public:
  void on_corrupt_mine(std::span<const NodeIndex> successes, AdversaryView& view,
                       RandomStream& rng) override {
    fallback_ = false;
    if (successes.empty()) return;
    std::vector<Chain> parents;
    if (view.advantage_prev == 0 && view.last_nonempty_honest_only) {
      parents.push_back(select_base(view, rng));
    } else {
      parents = distinct_longest(private_, view.adopted);
    }
    const std::uint32_t vr = view.fresh_vdf_round();
    BlockId best_parent = parents.front().tip;
    NodeIndex best_miner = successes.front();
    std::uint64_t best = UINT64_MAX;
    for (NodeIndex s : successes) {
      for (const Chain& c : parents) {
        const std::uint64_t d = view.store->preview_digest(c.tip, s, view.round, vr);
        if (d < best) {
          best = d;
          best_parent = c.tip;
          best_miner = s;
        }
      }
    }
    private_.assign(1, view.store->chain(mine_on(view, best_parent, best_miner)));
  }

  ReleasePlan plan_releases(AdversaryView& view, RandomStream&) override {
    ReleasePlan plan;
    release_if_competitive(private_, view, plan);
    return plan;
  }
};

class FirstSeenSplit final : public Adversary {
 public:
  void on_corrupt_mine(std::span<const NodeIndex> successes, AdversaryView& view,
                       RandomStream& rng) override {
    fallback_ = false;
    pair_ = false;
    if (successes.empty()) return;
    const Chain base = select_base(view, rng);
    private_.assign(1, view.store->chain(mine_on(view, base.tip, successes[0])));
    if (successes.size() >= 2) {
      private_.push_back(view.store->chain(mine_on(view, base.tip, successes[1])));
      pair_ = true;
    }
  }

  ReleasePlan plan_releases(AdversaryView& view, RandomStream&) override {
    ReleasePlan plan;
    if (!pair_) {
      release_if_competitive(private_, view, plan);
      return plan;
    }
    if (private_.front().length < view.honest_max_len) return plan;
    const std::uint32_t h = view.cfg->honest_count();
    const BlockId a = private_[0].tip;
    const BlockId b = private_[1].tip;
    for (std::uint32_t i = 0; i < h; ++i) {
      const bool first_half = i < (h + 1) / 2;
      plan.targeted.push_back({static_cast<NodeIndex>(i), Delivery{first_half ? a : b, 1}});
      plan.targeted.push_back({static_cast<NodeIndex>(i), Delivery{first_half ? b : a, 2}});
    }
    return plan;
  }

 private:
  bool pair_ = false;
};

}  // namespace

Chain Adversary::select_base(AdversaryView& view, RandomStream& rng) {
  const std::vector<Chain> longest = distinct_longest(private_, view.adopted);
  if (view.advantage_prev == 0 && view.last_nonempty_honest_only) {
    std::vector<Chain> honest_ended;
    for (const Chain& c : longest) {
      if ((*view.store)[c.tip].honest) honest_ended.push_back(c);
    }
    if (!honest_ended.empty()) return pick(honest_ended, rng);
    fallback_ = true;
    return pick(longest, rng);
  }
  for (const Chain& c : private_) {
    if (c.length == longest.front().length) return c;
  }
  return pick(longest, rng);
}

BlockId Adversary::mine_on(AdversaryView& view, BlockId parent, NodeIndex miner) {
  return view.store->extend(parent, miner, view.round, false, view.fresh_vdf_round());
}

std::unique_ptr<Adversary> make_adversary(AdversaryTag tag) {
  switch (tag) {
    case AdversaryTag::kNone: return std::make_unique<ProtocolFollower>();
    case AdversaryTag::kPrivateChain: return std::make_unique<PrivateChain>();
    case AdversaryTag::kSelectiveRelease: return std::make_unique<SelectiveRelease>();
    case AdversaryTag::kLexGrind: return std::make_unique<LexGrind>();
    case AdversaryTag::kFirstSeenSplit: return std::make_unique<FirstSeenSplit>();
  }
  throw ArgumentError("make_adversary: invalid tag");
}

}  // namespace nakasim
