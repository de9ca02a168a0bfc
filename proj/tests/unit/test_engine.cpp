#include <gtest/gtest.h>

#include <sstream>

#include "nakasim/engine.hpp"
#include "nakasim/errors.hpp"
#include "nakasim/trace_io.hpp"

using namespace nakasim;

namespace {

SimConfig make(std::uint32_t n, std::uint32_t b, double p, std::uint32_t T, std::uint64_t seed = 1) {
  SimConfig c;
  c.n = n;
  c.b = b;
  c.p = p;
  c.T = T;
  c.seed = seed;
  return c;
}

std::string csv_of(const ProcessTrace& tr) {
  std::ostringstream os;
  write_trace_csv(os, tr);
  return os.str();
}

std::string json_of(const ProcessTrace& tr) {
  std::ostringstream os;
  write_trace_json(os, tr);
  return os.str();
}

}  // namespace

TEST(Config, Validation) {
  EXPECT_NO_THROW(make(4, 3, 0.5, 1).validate());
  EXPECT_THROW(make(4, 4, 0.5, 1).validate(), ConfigError);
  EXPECT_THROW(make(0, 0, 0.5, 1).validate(), ConfigError);
  EXPECT_THROW(make(4, 0, 1.5, 1).validate(), ConfigError);
  EXPECT_THROW(make(4, 0, -0.1, 1).validate(), ConfigError);
  EXPECT_THROW(make(4, 0, 0.5, 0).validate(), ConfigError);
  EXPECT_THROW(Simulation(make(4, 4, 0.5, 1)), ConfigError);
  SimConfig c = make(6, 2, 0.5, 3);
  EXPECT_FALSE(c.is_corrupt(3));
  EXPECT_TRUE(c.is_corrupt(4));
  EXPECT_EQ(c.honest_count(), 4u);
}

TEST(Config, AdversaryNames) {
  for (auto t : {AdversaryTag::kNone, AdversaryTag::kPrivateChain, AdversaryTag::kSelectiveRelease,
                 AdversaryTag::kLexGrind, AdversaryTag::kFirstSeenSplit}) {
    EXPECT_EQ(parse_adversary(to_string(t)), t);
  }
  EXPECT_THROW(parse_adversary("selfish"), ArgumentError);
}

TEST(Engine, SingleNodeNeverForks) {
  const ProcessTrace tr = run(make(1, 0, 1.0, 5));
  ASSERT_EQ(tr.rounds.size(), 5u);
  for (const RoundRecord& r : tr.rounds) {
    EXPECT_EQ(r.prefix.max_inconsistency, 0u);
    EXPECT_EQ(r.prefix.common_prefix_len, r.t + 1);
  }
  EXPECT_EQ(tr.summary.honest_max_len, 6u);
  EXPECT_EQ(tr.summary.final_prefix_len, 6u);
}

TEST(Engine, ZeroPLeavesStateUnchanged) {
  Simulation sim(make(5, 1, 0.0, 40));
  const ProcessTrace tr = sim.finish();
  EXPECT_EQ(sim.state().store.size(), 1u);
  EXPECT_EQ(sim.state().round, 40u);
  for (const RoundRecord& r : tr.rounds) {
    EXPECT_EQ(r.nb + r.ab, 0u);
    EXPECT_EQ(r.prefix.common_prefix_len, 1u);
  }
  EXPECT_EQ(tr.summary.nonempty_rounds, 0u);
}

TEST(Engine, StepPastHorizonIsContractViolation) {
  Simulation sim(make(2, 0, 0.5, 2));
  sim.step();
  sim.step();
  EXPECT_TRUE(sim.done());
  EXPECT_THROW(sim.step(), ContractViolation);
}

TEST(Engine, FullMiningEveryTipInNewestLayer) {
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    Simulation sim(make(4, 0, 1.0, 50, seed), RunOptions{false, false});
    while (!sim.done()) {
      const RoundRecord& r = sim.step();
      ASSERT_EQ(r.nb, 4u);
      const auto& st = sim.state();
      for (std::uint32_t i = 0; i < 4; ++i) {
        const Block& b = st.store[st.local_tip[i].tip];
        ASSERT_EQ(b.round, r.t);
        ASSERT_EQ(b.miner, static_cast<NodeIndex>(i));
      }
      // Four longest chains announced for the next round, one per node.
      ASSERT_EQ(st.broadcasts.size(), 4u);
      for (const Delivery& d : st.broadcasts) ASSERT_EQ(st.store.length(d.tip), r.t + 1);
    }
  }
}

TEST(Engine, Deterministic) {
  for (auto adv : {AdversaryTag::kNone, AdversaryTag::kSelectiveRelease, AdversaryTag::kFirstSeenSplit}) {
    SimConfig c = make(12, 3, 0.2, 150, 99);
    c.adversary = adv;
    c.selective_relay = true;
    c.vdf_mode = true;
    EXPECT_EQ(csv_of(run(c)), csv_of(run(c)));
    EXPECT_EQ(json_of(run(c)), json_of(run(c)));
  }
}

TEST(Engine, MiningIndependentOfStrategyAndAdversary) {
  SimConfig base = make(10, 3, 0.15, 200, 5);
  const ProcessTrace ref = run(base);
  for (auto s : {StrategyTag::kFirstSeen, StrategyTag::kLexFirst, StrategyTag::kGlobalCoin}) {
    for (auto a : {AdversaryTag::kNone, AdversaryTag::kPrivateChain, AdversaryTag::kLexGrind}) {
      SimConfig c = base;
      c.strategy = s;
      c.adversary = a;
      const ProcessTrace tr = run(c);
      for (std::size_t i = 0; i < ref.rounds.size(); ++i) {
        ASSERT_EQ(tr.rounds[i].nb, ref.rounds[i].nb);
        ASSERT_EQ(tr.rounds[i].ab, ref.rounds[i].ab);
      }
    }
  }
}

TEST(Engine, HonestSpreadAtMostOneWithoutAdversary) {
  for (auto s : {StrategyTag::kUniformRandom, StrategyTag::kFirstSeen, StrategyTag::kLexFirst,
                 StrategyTag::kGlobalCoin}) {
    for (double p : {0.05, 0.3, 1.0}) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SimConfig c = make(9, 0, p, 120, seed);
        c.strategy = s;
        const ProcessTrace tr = run(c);
        ASSERT_EQ(tr.summary.spread_violations, 0u);
        for (const RoundRecord& r : tr.rounds) ASSERT_LE(r.honest_max_len - r.honest_min_len, 1u);
      }
    }
  }
}

TEST(Engine, RelayGrowthProperty) {
  for (auto a : {AdversaryTag::kPrivateChain, AdversaryTag::kSelectiveRelease, AdversaryTag::kLexGrind,
                 AdversaryTag::kFirstSeenSplit}) {
    for (bool vdf : {false, true}) {
      for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        SimConfig c = make(12, 4, 0.2, 200, seed);
        c.adversary = a;
        c.selective_relay = true;
        c.vdf_mode = vdf;
        const ProcessTrace tr = run(c);
        ASSERT_EQ(tr.summary.growth_violations, 0u) << to_string(a) << " vdf=" << vdf << " seed=" << seed;
        std::uint32_t prev = 1;
        for (const RoundRecord& r : tr.rounds) {
          ASSERT_GE(r.honest_max_len, prev);
          if (r.nb > 0) ASSERT_GE(r.honest_max_len, prev + 1);
          prev = r.honest_max_len;
        }
      }
    }
  }
}

TEST(Engine, VdfModeBoundsAcceptedLength) {
  for (auto a : {AdversaryTag::kPrivateChain, AdversaryTag::kSelectiveRelease, AdversaryTag::kLexGrind,
                 AdversaryTag::kFirstSeenSplit}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SimConfig c = make(10, 4, 0.6, 100, seed);
      c.adversary = a;
      c.vdf_mode = true;
      c.selective_relay = true;
      const ProcessTrace tr = run(c);
      EXPECT_EQ(tr.summary.length_violations, 0u);
      for (const RoundRecord& r : tr.rounds) ASSERT_LE(r.adv_max_len, r.t + 1);
    }
  }
}

TEST(Engine, ProcessesFollowDefinitions) {
  SimConfig c = make(10, 3, 0.1, 400, 3);
  c.adversary = AdversaryTag::kPrivateChain;
  const ProcessTrace tr = run(c);
  std::uint32_t n_prev = 0;
  std::int64_t j = 0;
  std::uint64_t m = 0;
  for (const RoundRecord& r : tr.rounds) {
    ASSERT_LE(r.nb, 7u);
    ASSERT_LE(r.ab, 3u);
    const std::uint32_t n_now = update_advantage(n_prev, r.nb, r.ab);
    ASSERT_EQ(r.advantage, n_now);
    if (r.nb + r.ab > 0) {
      ++m;
      j += (r.ab == 0) - (r.nb == 0);
    }
    ASSERT_EQ(r.opportunity, j);
    ASSERT_EQ(r.nonempty, m);
    n_prev = n_now;
  }
  EXPECT_EQ(tr.summary.advantage_final, n_prev);
  EXPECT_EQ(tr.summary.opportunity_final, j);
}

TEST(Engine, SummaryRecomputableFromRecords) {
  SimConfig c = make(8, 2, 0.3, 300, 11);
  c.adversary = AdversaryTag::kSelectiveRelease;
  c.selective_relay = true;
  const ProcessTrace tr = run(c);
  std::uint32_t peak = 0;
  std::uint64_t lead = 0;
  for (const RoundRecord& r : tr.rounds) {
    peak = std::max(peak, r.prefix.max_inconsistency);
    lead += r.lead_violation;
  }
  EXPECT_EQ(tr.summary.peak_inconsistency, peak);
  EXPECT_EQ(tr.summary.lead_violations, lead);
  EXPECT_EQ(tr.summary.final_prefix_len, tr.rounds.back().prefix.common_prefix_len);
  EXPECT_EQ(tr.summary.final_inconsistency, tr.rounds.back().prefix.max_inconsistency);
  EXPECT_DOUBLE_EQ(tr.summary.prefix_growth_rate, (tr.summary.final_prefix_len - 1) / 300.0);
}

TEST(Engine, HonestBlocksInRecentWindowAtLeastJ) {
  // Among the most recent m blocks of a longest honest chain at the end,
  // at least J(m) are honest whenever J(m) >= 0, J read backwards over the
  // last m nonempty rounds.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimConfig c = make(12, 3, 0.1, 300, seed);
    c.adversary = AdversaryTag::kPrivateChain;
    c.vdf_mode = true;
    c.selective_relay = true;
    Simulation sim(c);
    const ProcessTrace tr = sim.finish();
    const auto& st = sim.state();
    BlockId best = st.local_tip[0].tip;
    for (std::uint32_t i = 0; i < c.honest_count(); ++i) {
      if (st.local_tip[i].length > st.store.length(best)) best = st.local_tip[i].tip;
    }
    std::vector<const RoundRecord*> nonempty;
    for (const RoundRecord& r : tr.rounds) {
      if (r.nb + r.ab > 0) nonempty.push_back(&r);
    }
    std::int64_t j = 0;
    std::uint32_t honest = 0;
    BlockId cur = best;
    for (std::size_t m = 1; m <= nonempty.size() && m < st.store.length(best); ++m) {
      const RoundRecord& r = *nonempty[nonempty.size() - m];
      j += (r.ab == 0) - (r.nb == 0);
      honest += st.store[cur].honest;
      cur = *st.store[cur].parent;
      if (j >= 0) ASSERT_GE(static_cast<std::int64_t>(honest), j) << "seed " << seed << " m " << m;
    }
  }
}

TEST(TraceIo, CsvHeaderAndRows) {
  const ProcessTrace tr = run(make(4, 0, 1.0, 8, 3));
  const std::string csv = csv_of(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,NB,AB,common_prefix_len,max_inconsistency,N,honest_max_len,adv_max_len");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(TraceIo, JsonSections) {
  SimConfig c = make(6, 2, 0.5, 20, 3);
  c.adversary = AdversaryTag::kSelectiveRelease;
  c.vdf_mode = true;
  const std::string js = json_of(run(c));
  for (const char* key : {"\"schema\"", "\"config\"", "\"rounds\"", "\"releases\"", "\"rejects\"", "\"summary\""}) {
    EXPECT_NE(js.find(key), std::string::npos) << key;
  }
  EXPECT_NE(js.find("nakasim-trace/1"), std::string::npos);
}

TEST(Engine, Figure1ConfigPrefixAcrossSeeds) {
  double sum = 0;
  constexpr int kSeeds = 4000;
  for (int s = 1; s <= kSeeds; ++s) {
    const ProcessTrace tr = run(make(4, 0, 1.0, 8, static_cast<std::uint64_t>(s)), RunOptions{false, false});
    ASSERT_GE(tr.summary.final_prefix_len, 1u);
    sum += tr.summary.final_prefix_len;
  }
  // t + 1 - O(n): between t + 1 - 2n and t + 1.
  EXPECT_LT(sum / kSeeds, 9.0);
  EXPECT_GT(sum / kSeeds, 9.0 - 2.0 * 4);
}
