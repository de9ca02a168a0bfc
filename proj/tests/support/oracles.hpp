#pragma once

// Reference computations written independently of the library code paths
// they check: a partition-lattice Markov chain for coalescing walkers,
// 50-digit evaluations of the closed forms, and the hand-built fig1 block tree.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <stdexcept>
#include <vector>

#include "nakasim/chain.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Dec = boost::multiprecision::cpp_dec_float_50;

// Partitions of {0..k-1} as restricted growth strings.
inline std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int i, int maxv) -> void {
    if (i == k) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  if (k == 0) return {{}};
  a[0] = 0;
  rec(rec, 1, 0);
  return out;
}

inline std::vector<int> canonical(const std::vector<int>& labels) {
  std::map<int, int> rename;
  std::vector<int> out;
  for (int l : labels) {
    auto [it, fresh] = rename.emplace(l, static_cast<int>(rename.size()));
    out.push_back(it->second);
  }
  return out;
}

// Exact expected coalescence time of k walkers started on distinct
// vertices of the complete graph with self-loops on n_g vertices, every
// live walker moving each step. States are partitions of the walkers; one
// step sends every block to a uniform vertex and merges blocks that land
// together. Solves (I - Q) E = 1 over the transient states.
inline Rational partition_chain_expected_time(int n_g, int k) {
  const auto parts = set_partitions(k);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < parts.size(); ++i) index[parts[i]] = i;
  const std::size_t s = parts.size();
  std::vector<std::vector<Rational>> a(s, std::vector<Rational>(s + 1, Rational(0)));
  for (std::size_t i = 0; i < s; ++i) {
    const auto& part = parts[i];
    const int blocks = *std::max_element(part.begin(), part.end()) + 1;
    a[i][i] += 1;
    if (blocks == 1) continue;  // absorbing: E = 0
    a[i][s] = 1;
    std::int64_t total = 1;
    for (int j = 0; j < blocks; ++j) total *= n_g;
    const Rational w(1, total);
    std::vector<int> dest(static_cast<std::size_t>(blocks), 0);
    for (std::int64_t code = 0; code < total; ++code) {
      std::int64_t c = code;
      for (int j = 0; j < blocks; ++j) {
        dest[static_cast<std::size_t>(j)] = static_cast<int>(c % n_g);
        c /= n_g;
      }
      std::vector<int> labels(static_cast<std::size_t>(k));
      for (int x = 0; x < k; ++x) labels[static_cast<std::size_t>(x)] = dest[static_cast<std::size_t>(part[static_cast<std::size_t>(x)])];
      a[i][index.at(canonical(labels))] -= w;
    }
  }
  // Gauss-Jordan over the rationals.
  for (std::size_t col = 0; col < s; ++col) {
    std::size_t piv = col;
    while (piv < s && a[piv][col] == 0) ++piv;
    if (piv == s) throw std::runtime_error("singular system");
    std::swap(a[piv], a[col]);
    const Rational d = a[col][col];
    for (auto& x : a[col]) x /= d;
    for (std::size_t r = 0; r < s; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = col; c <= s; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<int> finest(static_cast<std::size_t>(k));
  for (int x = 0; x < k; ++x) finest[static_cast<std::size_t>(x)] = x;
  return a[index.at(finest)][s];
}

inline Rational honest_majority_bound(std::int64_t n, std::int64_t b) {
  return Rational(n - 2 * b, 2 * (n - b) * (n - b));
}

struct Probs {
  Dec plus, minus, star;
};

// Conditional honest-only / corrupt-only probabilities by summing the
// binomial law of (honest successes, corrupt successes).
inline Probs transition_by_enumeration(int n, int b, const Dec& p) {
  using boost::multiprecision::pow;
  const Dec q = 1 - p;
  Dec none_h = pow(q, n - b);
  Dec none_c = pow(q, b);
  Dec some_h = 0;
  Dec some_c = 0;
  Dec c = 1;
  for (int i = 1; i <= n - b; ++i) {
    c = c * (n - b - i + 1) / i;
    some_h += c * pow(p, i) * pow(q, n - b - i);
  }
  c = 1;
  for (int i = 1; i <= b; ++i) {
    c = c * (b - i + 1) / i;
    some_c += c * pow(p, i) * pow(q, b - i);
  }
  const Dec nonempty = 1 - none_h * none_c;
  Probs out;
  out.plus = none_c * some_h / nonempty;
  out.minus = none_h * some_c / nonempty;
  out.star = out.plus + out.minus;
  return out;
}

inline Dec beta(int n, int b, const Dec& p) {
  const Dec np3 = 3 * Dec(n) * p;
  return Dec(n - b) * p / (2 * np3 * np3);
}

inline Dec m_star(const Probs& t, const Dec& beta_v, const Dec& eps) {
  using boost::multiprecision::log;
  const Dec d = t.plus - t.minus;
  const Dec b1 = 4 * log(1 / eps) / (t.star * t.star);
  const Dec b2 = 4 / (beta_v * d);
  const Dec b3 = 16 * t.star / (d * d) * log(4 / eps);
  return std::max({b1, b2, b3});
}

inline Dec success_expression(const Probs& t, const Dec& beta_v, int n, int b, const Dec& M) {
  using boost::multiprecision::exp;
  const Dec d = t.plus - t.minus;
  return 1 - exp(-t.star * t.star * M / 2) - exp(-d * d * M / (16 * t.star)) -
         (2 / beta_v) * exp(-Dec(n - b) / 2);
}

inline double rel_err(double got, const Dec& want) {
  const Dec w = want;
  if (w == 0) return std::abs(got);
  return static_cast<double>(boost::multiprecision::abs((Dec(got) - w) / w));
}

// The fig1 example block tree (n = 4, p = 1, b = 0, 8 rounds). Block ids
// are laid out by round: round r holds ids 4(r-1)+1..4r, mined by pink (0),
// yellow (1), green (2), blue (3) in that order. Parents on the four
// final chains follow the backwards chains; every other block extends its
// miner's previous-round block.
struct Fig1 {
  nakasim::BlockStore store;
  std::vector<nakasim::BlockId> tips;  // 32, 29, 30, 31
};

inline Fig1 fig1_store() {
  // parent_color[r][c]: color at round r-1 that (c, r) attaches to.
  constexpr int P = 0, Y = 1, G = 2, B = 3;
  const int parent_color[9][4] = {
      {},
      {-1, -1, -1, -1},
      {P, B, G, B},  // yellow2 -> blue1
      {P, Y, G, B},  // yellow3 -> yellow2
      {P, Y, Y, B},  // green4 -> yellow3
      {P, G, G, B},  // yellow5, green5 -> green4
      {G, G, G, Y},  // pink6, yellow6 -> green5; blue6 -> yellow5
      {B, P, Y, B},  // pink7 -> blue6; yellow7 -> pink6; green7 -> yellow6
      {Y, Y, G, P},  // pink8, yellow8 -> yellow7; green8 -> green7; blue8 -> pink7
  };
  Fig1 f;
  for (std::uint32_t r = 1; r <= 8; ++r) {
    for (int c = 0; c < 4; ++c) {
      const int pc = parent_color[r][c];
      const nakasim::BlockId parent = pc < 0 ? nakasim::kGenesis : nakasim::BlockId{4 * (r - 2) + 1 + static_cast<std::uint32_t>(pc)};
      f.store.extend(parent, c, r, true, r - 1);
    }
  }
  f.tips = {nakasim::BlockId{32}, nakasim::BlockId{29}, nakasim::BlockId{30}, nakasim::BlockId{31}};
  return f;
}

// Brute-force common prefix: ancestor sets by parent walks.
inline std::pair<std::uint32_t, std::uint32_t> brute_prefix(const nakasim::BlockStore& s,
                                                            const std::vector<nakasim::BlockId>& tips) {
  std::vector<std::vector<nakasim::BlockId>> paths;
  for (auto t : tips) {
    std::vector<nakasim::BlockId> path;
    std::optional<nakasim::BlockId> cur = t;
    while (cur) {
      path.push_back(*cur);
      cur = s.at(*cur).parent;
    }
    std::reverse(path.begin(), path.end());
    paths.push_back(path);
  }
  std::size_t common = paths[0].size();
  std::size_t longest = 0;
  for (const auto& p : paths) {
    std::size_t k = 0;
    while (k < std::min(common, p.size()) && p[k] == paths[0][k]) ++k;
    common = k;
    longest = std::max(longest, p.size());
  }
  return {static_cast<std::uint32_t>(common), static_cast<std::uint32_t>(longest - common)};
}

}  // namespace oracle
