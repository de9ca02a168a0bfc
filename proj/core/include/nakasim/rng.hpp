#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nakasim {

/// SplitMix64 finalizer. Used for seed derivation and for the keyed
/// pseudo-hashes (block digests, global-coin priorities, VDF tokens).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of several words into one 64-bit key.
constexpr std::uint64_t mix_all(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

/// Replica seed for replica `replica` of sweep cell `cell`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell,
                                    std::uint64_t replica) noexcept {
  return mix_all({base, cell, replica});
}

/// Named sub-streams spawned from one master seed.
enum class StreamTag : std::uint64_t {
  kMining = 0x4d494e45,     // "MINE"
  kStrategy = 0x54494542,   // "TIEB"
  kAdversary = 0x41445652,  // "ADVR"
  kWalk = 0x57414c4b,       // "WALK"
  kSalt = 0x53414c54,       // "SALT"
};

/// A deterministic random stream. The engine is std::mt19937_64; the
/// helpers below avoid the implementation-defined std distributions so
/// that draws are identical across standard libraries.
class RandomStream {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, StreamTag tag)
      : engine_(mix_all({master, static_cast<std::uint64_t>(tag)})) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t uniform_index(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nakasim
