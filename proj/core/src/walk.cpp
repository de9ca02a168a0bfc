#include "nakasim/walk.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "nakasim/errors.hpp"

namespace nakasim {

WalkSystem::WalkSystem(std::uint32_t n_g, double u, std::span<const std::uint32_t> starts)
    : n_g_(n_g), u_(u), owner_(n_g, 0) {
  if (n_g == 0) throw ArgumentError("WalkSystem: n_g must be positive");
  if (!(u > 0.0 && u <= 1.0)) throw ArgumentError("WalkSystem: u must lie in (0, 1]");
  if (starts.empty()) throw ArgumentError("WalkSystem: need at least one walker");
  pos_.assign(starts.begin(), starts.end());
  rep_.resize(pos_.size());
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (pos_[i] >= n_g) throw ArgumentError("WalkSystem: start vertex out of range");
    rep_[i] = i;
  }
  alive_count_ = static_cast<std::uint32_t>(pos_.size());
  merge_colocated();
}

WalkSystem WalkSystem::distinct(std::uint32_t n_g, double u, std::uint32_t k) {
  if (k > n_g) throw ArgumentError("WalkSystem: more walkers than vertices for distinct starts");
  std::vector<std::uint32_t> starts(k);
  for (std::uint32_t i = 0; i < k; ++i) starts[i] = i;
  return WalkSystem(n_g, u, starts);
}

void WalkSystem::merge_colocated() {
  std::vector<std::uint32_t> touched;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (rep_[i] != i) continue;
    std::uint32_t& slot = owner_[pos_[i]];
    if (slot == 0) {
      slot = static_cast<std::uint32_t>(i + 1);
      touched.push_back(pos_[i]);
      continue;
    }
    const std::size_t keep = slot - 1;
    for (std::size_t& r : rep_) {
      if (r == i) r = keep;
    }
    --alive_count_;
  }
  for (std::uint32_t v : touched) owner_[v] = 0;
}

void WalkSystem::step(RandomStream& rng) {
  if (alive_count_ == 0) throw ContractViolation("WalkSystem::step: no walker alive");
  ++steps_;
  if (u_ < 1.0 && !rng.bernoulli(u_)) return;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    if (rep_[i] == i) pos_[i] = static_cast<std::uint32_t>(rng.uniform_index(n_g_));
  }
  merge_colocated();
}

std::uint64_t coalescence_time(std::uint32_t n_g, double u, std::uint32_t k, RandomStream& rng) {
  if (k == 0) throw ArgumentError("coalescence_time: need at least one walker");
  if (k > n_g) throw ArgumentError("coalescence_time: more walkers than vertices for distinct starts");
  if (!(u > 0.0 && u <= 1.0)) throw ArgumentError("coalescence_time: u must lie in (0, 1]");
  // Same law as WalkSystem, tracking only live positions.
  std::vector<std::uint32_t> live(k);
  std::vector<std::uint32_t> seen(n_g, 0);
  std::uint32_t stamp = 0;
  std::uint64_t steps = 0;
  while (live.size() > 1) {
    ++steps;
    if (u < 1.0 && !rng.bernoulli(u)) continue;
    ++stamp;
    std::size_t out = 0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const auto v = static_cast<std::uint32_t>(rng.uniform_index(n_g));
      if (seen[v] != stamp) {
        seen[v] = stamp;
        live[out++] = v;
      }
    }
    live.resize(out);
  }
  return steps;
}

long double expected_coalescence_time(std::uint32_t n_g, double u, std::uint32_t k) {
  if (k == 0 || k > n_g) throw ArgumentError("expected_coalescence_time: need 1 <= k <= n_g");
  if (!(u > 0.0 && u <= 1.0)) throw ArgumentError("expected_coalescence_time: u must lie in (0, 1]");
  // Row i of w holds S(i, j) (n_g)_j / n_g^i, built by the recurrence on
  // where the i-th walker lands: an occupied vertex or a fresh one.
  const auto ng = static_cast<long double>(n_g);
  std::vector<std::vector<long double>> w(k + 1, std::vector<long double>(k + 1, 0.0L));
  w[0][0] = 1.0L;
  for (std::uint32_t i = 1; i <= k; ++i) {
    for (std::uint32_t j = 1; j <= i; ++j) {
      const long double stay = w[i - 1][j] * static_cast<long double>(j) / ng;
      const long double fresh = w[i - 1][j - 1] * (ng - static_cast<long double>(j - 1)) / ng;
      w[i][j] = stay + fresh;
    }
  }
  std::vector<long double> e(k + 1, 0.0L);
  const auto lu = static_cast<long double>(u);
  for (std::uint32_t i = 2; i <= k; ++i) {
    long double acc = 1.0L;
    for (std::uint32_t j = 1; j < i; ++j) acc += lu * w[i][j] * e[j];
    e[i] = acc / (lu * (1.0L - w[i][i]));
  }
  return e[k];
}

BackwardsWalks extract_backwards_walks(const BlockStore& store, std::span<const BlockId> tips) {
  BackwardsWalks out;
  if (tips.empty()) return out;
  for (BlockId t : tips) {
    std::vector<ColorStep> seq;
    for (const Block* b = &store.at(t);; b = &store[*b->parent]) {
      seq.push_back(ColorStep{b->miner, b->round});
      if (!b->parent) break;
    }
    out.sequences.push_back(std::move(seq));
  }
  // Longest agreement counted from the genesis end.
  std::size_t common = out.sequences.front().size();
  std::size_t longest = 0;
  const auto& first = out.sequences.front();
  for (const auto& s : out.sequences) {
    longest = std::max(longest, s.size());
    std::size_t k = 0;
    const std::size_t lim = std::min(common, s.size());
    while (k < lim && s[s.size() - 1 - k] == first[first.size() - 1 - k]) ++k;
    common = k;
  }
  out.coalescence_step = static_cast<std::uint32_t>(longest - common);
  return out;
}

void write_walk_csv(std::ostream& os, std::span<const WalkSample> rows) {
  os << "n_g,u,k,seed,coalescence_time\n";
  char buf[32];
  for (const WalkSample& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.u);
    os << r.n_g << ',' << buf << ',' << r.k << ',' << r.seed << ',' << r.coalescence_time << '\n';
  }
}

}  // namespace nakasim
