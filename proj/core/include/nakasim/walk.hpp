#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nakasim/chain.hpp"
#include "nakasim/rng.hpp"

namespace nakasim {

/// Coalescing walkers on the complete graph with self-loops over n_g
/// vertices. Laziness is system-wide: each step either every walker
/// stays (probability 1-u) or every live walker jumps to a uniform vertex.
class WalkSystem {
 public:
  /// Walkers start at the given vertices; walkers sharing a start are
  /// merged immediately. Throws ArgumentError on bad parameters.
  WalkSystem(std::uint32_t n_g, double u, std::span<const std::uint32_t> starts);
  /// k walkers on vertices 0..k-1. Throws ArgumentError when k > n_g.
  static WalkSystem distinct(std::uint32_t n_g, double u, std::uint32_t k);

  void step(RandomStream& rng);

  [[nodiscard]] std::uint32_t n_g() const noexcept { return n_g_; }
  [[nodiscard]] double u() const noexcept { return u_; }
  [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::uint32_t alive_count() const noexcept { return alive_count_; }
  [[nodiscard]] bool coalesced() const noexcept { return alive_count_ <= 1; }
  [[nodiscard]] bool alive(std::size_t walker) const { return rep_.at(walker) == walker; }
  /// Position of a walker; merged walkers report their representative's.
  [[nodiscard]] std::uint32_t position(std::size_t walker) const { return pos_[rep_.at(walker)]; }
  [[nodiscard]] std::size_t walker_count() const noexcept { return pos_.size(); }

 private:
  void merge_colocated();

  std::uint32_t n_g_;
  double u_;
  std::uint64_t steps_ = 0;
  std::uint32_t alive_count_ = 0;
  std::vector<std::uint32_t> pos_;
  std::vector<std::size_t> rep_;
  std::vector<std::uint32_t> owner_;  // vertex -> walker index + 1, scratch
};

/// One step of the walk (free-function form).
inline void step_walks(WalkSystem& sys, RandomStream& rng) { sys.step(rng); }

/// Steps until one walker remains, k walkers from distinct vertices.
/// Throws ArgumentError when k > n_g or k == 0.
std::uint64_t coalescence_time(std::uint32_t n_g, double u, std::uint32_t k, RandomStream& rng);

/// Exact E[coalescence time] for k walkers from distinct vertices, from the
/// chain on the number of live walkers: one move takes k walkers to j
/// distinct vertices with probability S(k, j) (n_g)_j / n_g^k.
long double expected_coalescence_time(std::uint32_t n_g, double u, std::uint32_t k);

struct ColorStep {
  NodeIndex miner = kGenesisMiner;
  std::uint32_t round = 0;  // layer index
  friend constexpr bool operator==(const ColorStep&, const ColorStep&) = default;
};

struct BackwardsWalks {
  std::vector<std::vector<ColorStep>> sequences;  // tip -> genesis, one per tip
  std::uint32_t coalescence_step = 0;
};

/// Reads each tip's (miner, round) sequence back to genesis. The
/// coalescence step is the number of backwards steps from the deepest tip
/// until all sequences agree, computed from the sequences alone; (miner,
/// round) identifies a block when every node mines at most once a round.
BackwardsWalks extract_backwards_walks(const BlockStore& store, std::span<const BlockId> tips);

struct WalkSample {
  std::uint32_t n_g = 0;
  double u = 1.0;
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::uint64_t coalescence_time = 0;
};

void write_walk_csv(std::ostream& os, std::span<const WalkSample> rows);

}  // namespace nakasim
