#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nakasim/engine.hpp"
#include "nakasim/errors.hpp"
#include "nakasim/stats.hpp"
#include "nakasim/walk.hpp"
#include "oracles.hpp"

using namespace nakasim;

TEST(WalkOracle, PartitionChainFourWalkers) {
  const oracle::Rational e = oracle::partition_chain_expected_time(4, 4);
  EXPECT_EQ(e, oracle::Rational(838, 145));
}

TEST(WalkOracle, CountChainMatchesPartitionChain) {
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      const double want = static_cast<double>(oracle::partition_chain_expected_time(n, k));
      EXPECT_NEAR(static_cast<double>(expected_coalescence_time(static_cast<std::uint32_t>(n), 1.0,
                                                                static_cast<std::uint32_t>(k))),
                  want, 1e-12 * std::max(1.0, want))
          << n << " " << k;
    }
  }
}

TEST(WalkOracle, LazyScalesAsOneOverU) {
  for (double u : {0.25, 0.5, 1.0}) {
    EXPECT_NEAR(static_cast<double>(expected_coalescence_time(16, u, 16)) * u,
                static_cast<double>(expected_coalescence_time(16, 1.0, 16)), 1e-9);
  }
}

TEST(WalkSystem, SingleWalkerIsCoalescedAtStart) {
  WalkSystem w = WalkSystem::distinct(5, 1.0, 1);
  EXPECT_TRUE(w.coalesced());
  RandomStream rng(1, StreamTag::kWalk);
  EXPECT_EQ(coalescence_time(5, 1.0, 1, rng), 0u);
}

TEST(WalkSystem, BadArguments) {
  RandomStream rng(1, StreamTag::kWalk);
  EXPECT_THROW(coalescence_time(3, 1.0, 4, rng), ArgumentError);
  EXPECT_THROW(coalescence_time(3, 0.0, 2, rng), ArgumentError);
  EXPECT_THROW(WalkSystem::distinct(3, 1.0, 4), ArgumentError);
  const std::uint32_t bad[] = {0, 9};
  EXPECT_THROW(WalkSystem(3, 1.0, bad), ArgumentError);
}

TEST(WalkSystem, CoLocatedStartsMergeImmediately) {
  const std::uint32_t starts[] = {2, 2, 1};
  WalkSystem w(4, 1.0, starts);
  EXPECT_EQ(w.alive_count(), 2u);
  EXPECT_EQ(w.position(1), w.position(0));
}

TEST(WalkSystem, MergingIsPermanentAndCountNonIncreasing) {
  RandomStream rng(8, StreamTag::kWalk);
  for (int trial = 0; trial < 200; ++trial) {
    WalkSystem w = WalkSystem::distinct(6, 0.7, 6);
    std::uint32_t alive = w.alive_count();
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    while (!w.coalesced()) {
      w.step(rng);
      ASSERT_LE(w.alive_count(), alive);
      alive = w.alive_count();
      for (auto [a, b] : merged) ASSERT_EQ(w.position(a), w.position(b));
      for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = a + 1; b < 6; ++b) {
          if (w.position(a) == w.position(b)) merged.emplace_back(a, b);
        }
      }
    }
    for (int extra = 0; extra < 5; ++extra) {
      w.step(rng);
      ASSERT_EQ(w.alive_count(), 1u);
    }
  }
}

TEST(WalkSystem, SystemWideLaziness) {
  // With u < 1 a step either moves every live walker or none.
  RandomStream rng(12, StreamTag::kWalk);
  int stays = 0;
  int steps = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    WalkSystem w = WalkSystem::distinct(50, 0.5, 3);
    const std::uint32_t p0 = w.position(0), p1 = w.position(1), p2 = w.position(2);
    w.step(rng);
    ++steps;
    const int moved = (w.position(0) != p0) + (w.position(1) != p1) + (w.position(2) != p2);
    if (moved == 0) ++stays;
    // A move leaves a walker in place with probability 1/50, so "some but
    // not all moved" is rare; all-stay happens half the time.
  }
  EXPECT_NEAR(stays / double(steps), 0.5, 0.04);
}

TEST(WalkSystem, StepFormsAgree) {
  // The fast coalescence_time and WalkSystem follow the same law.
  RandomStream a(77, StreamTag::kWalk);
  RandomStream b(78, StreamTag::kWalk);
  std::vector<std::int64_t> fast, slow;
  for (int i = 0; i < 20000; ++i) {
    fast.push_back(static_cast<std::int64_t>(coalescence_time(6, 0.6, 6, a)));
    WalkSystem w = WalkSystem::distinct(6, 0.6, 6);
    while (!w.coalesced()) step_walks(w, b);
    slow.push_back(static_cast<std::int64_t>(w.steps()));
  }
  EXPECT_LT(ks_compare(fast, slow), 0.02);
}

TEST(WalkMonteCarlo, TwoWalkersTwoVertices) {
  RandomStream rng(2, StreamTag::kWalk);
  double sum = 0;
  constexpr int kRuns = 1000000;
  for (int i = 0; i < kRuns; ++i) sum += static_cast<double>(coalescence_time(2, 1.0, 2, rng));
  EXPECT_NEAR(sum / kRuns, 2.0, 0.02);
}

TEST(WalkMonteCarlo, FourWalkersNearExact) {
  RandomStream rng(4, StreamTag::kWalk);
  double sum = 0;
  constexpr int kRuns = 100000;
  for (int i = 0; i < kRuns; ++i) sum += static_cast<double>(coalescence_time(4, 1.0, 4, rng));
  EXPECT_NEAR(sum / kRuns, 838.0 / 145.0, 0.01 * 838.0 / 145.0);
}

TEST(WalkMonteCarlo, LazyRatioSixteenVertices) {
  RandomStream rng(16, StreamTag::kWalk);
  auto mean_of = [&](double u) {
    double s = 0;
    for (int i = 0; i < 20000; ++i) s += static_cast<double>(coalescence_time(16, u, 16, rng));
    return s / 20000;
  };
  const double ratio = mean_of(0.5) / mean_of(1.0);
  EXPECT_GE(ratio, 1.7);
  EXPECT_LE(ratio, 2.3);
}

TEST(WalkMonteCarlo, MoreBinsCoalesceSlower) {
  // Balls-and-bins dominance: the CDF with 8 bins lies above the CDF with
  // 16 bins (8 walkers in both), up to sampling error.
  RandomStream rng(88, StreamTag::kWalk);
  constexpr int kRuns = 50000;
  std::vector<int> few, many;
  for (int i = 0; i < kRuns; ++i) {
    few.push_back(static_cast<int>(coalescence_time(8, 1.0, 8, rng)));
    many.push_back(static_cast<int>(coalescence_time(16, 1.0, 8, rng)));
  }
  std::sort(few.begin(), few.end());
  std::sort(many.begin(), many.end());
  const double tol = 3.0 * std::sqrt(0.5 / kRuns);
  for (int x = 0; x <= 60; ++x) {
    const double fa = static_cast<double>(std::upper_bound(few.begin(), few.end(), x) - few.begin()) / kRuns;
    const double fb = static_cast<double>(std::upper_bound(many.begin(), many.end(), x) - many.begin()) / kRuns;
    EXPECT_GE(fa + tol, fb) << "x=" << x;
  }
}

TEST(BackwardsWalks, Figure1ChainOne) {
  const auto f = oracle::fig1_store();
  const BlockId tips[] = {f.tips[0]};
  const BackwardsWalks w = extract_backwards_walks(f.store, tips);
  ASSERT_EQ(w.sequences.size(), 1u);
  // blue, pink, blue, yellow, green, yellow, yellow, blue, genesis
  const std::vector<NodeIndex> colors = {3, 0, 3, 1, 2, 1, 1, 3, kGenesisMiner};
  ASSERT_EQ(w.sequences[0].size(), colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) {
    EXPECT_EQ(w.sequences[0][i].miner, colors[i]);
    EXPECT_EQ(w.sequences[0][i].round, 8 - i);
  }
  EXPECT_EQ(w.coalescence_step, 0u);
}

TEST(BackwardsWalks, Figure1AllFourCoalesceAtGreenFour) {
  const auto f = oracle::fig1_store();
  const BackwardsWalks w = extract_backwards_walks(f.store, f.tips);
  EXPECT_EQ(w.coalescence_step, 4u);
  for (const auto& s : w.sequences) EXPECT_EQ(s[4], (ColorStep{2, 4}));
}

TEST(BackwardsWalks, CoalescenceStepEqualsInconsistency) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    SimConfig cfg;
    cfg.n = 4;
    cfg.p = 1.0;
    cfg.T = 30;
    cfg.seed = seed;
    Simulation sim(cfg);
    const ProcessTrace tr = sim.finish();
    const BackwardsWalks w = extract_backwards_walks(sim.state().store, tr.final_tips);
    ASSERT_EQ(w.coalescence_step, tr.summary.final_inconsistency) << seed;
  }
}

TEST(WalkCsv, HeaderAndRows) {
  const WalkSample rows[] = {{4, 1.0, 4, 9, 6}, {16, 0.25, 16, 10, 120}};
  std::ostringstream os;
  write_walk_csv(os, rows);
  EXPECT_EQ(os.str(), "n_g,u,k,seed,coalescence_time\n4,1,4,9,6\n16,0.25,16,10,120\n");
}
