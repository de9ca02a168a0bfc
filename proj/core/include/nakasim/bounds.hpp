#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace nakasim {

/// Exact rational with positive denominator, in lowest terms.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  [[nodiscard]] long double value() const noexcept {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }
  friend constexpr bool operator==(const Fraction&, const Fraction&) = default;
};

/// Largest p an honest majority tolerates: (n-2b)/(2(n-b)^2). Negative when
/// b > n/2. Throws ArgumentError unless 0 <= b < n.
Fraction honest_majority_p_bound(std::int64_t n, std::int64_t b);

/// Conditional step law of the coalescing-opportunity walk given a
/// nonempty round.
struct TransitionProbs {
  long double p_plus = 0;   // honest-only
  long double p_minus = 0;  // corrupt-only
  long double p_star = 0;   // p_plus + p_minus
};

/// Throws DegenerateInputError for p in {0, 1} and ArgumentError for
/// p outside [0, 1] or b outside [0, n).
TransitionProbs transition_probs(std::int64_t n, std::int64_t b, long double p);

/// N(t): +1 on corrupt-only rounds, down by one (floored at 0) on
/// honest-only rounds, unchanged otherwise.
constexpr std::uint32_t update_advantage(std::uint32_t n_prev, std::uint32_t nb,
                                         std::uint32_t ab) noexcept {
  if (nb == 0 && ab > 0) return n_prev + 1;
  if (nb > 0 && ab == 0) return n_prev == 0 ? 0 : n_prev - 1;
  return n_prev;
}

class AdvantageProcess {
 public:
  AdvantageProcess() { history_.push_back(0); }
  std::uint32_t update(std::uint32_t nb, std::uint32_t ab);
  [[nodiscard]] std::uint32_t value() const noexcept { return history_.back(); }
  [[nodiscard]] const std::vector<std::uint32_t>& history() const noexcept { return history_; }

 private:
  std::vector<std::uint32_t> history_;  // N(0), N(1), ...
};

/// J(m) over nonempty rounds: +1 honest-only, -1 corrupt-only.
class OpportunityWalk {
 public:
  OpportunityWalk() { history_.push_back(0); }
  /// Throws ContractViolation when nb + ab == 0.
  std::int64_t update(std::uint32_t nb, std::uint32_t ab);
  [[nodiscard]] std::int64_t value() const noexcept { return history_.back(); }
  [[nodiscard]] std::uint64_t steps() const noexcept { return history_.size() - 1; }
  [[nodiscard]] const std::vector<std::int64_t>& history() const noexcept { return history_; }

 private:
  std::vector<std::int64_t> history_;  // J(0), J(1), ...
};

/// A probability expression clamped to [0, 1]; `vacuous` when clamping
/// was needed or the bound's precondition fails.
struct ClampedProbability {
  long double value = 0;
  long double raw = 0;
  bool vacuous = false;
};

struct OpportunityBound {
  long double threshold = 0;  // (p_plus - p_minus) M / 4
  ClampedProbability success;
};

/// Lower bound on J(M) and the probability it holds. Vacuous when
/// p_plus <= p_minus.
OpportunityBound opportunity_lower_bound(const TransitionProbs& tp, std::uint64_t M);

struct BoundParams {
  std::int64_t n = 0;
  std::int64_t b = 0;
  long double p = 0;
  long double epsilon = 0;
  TransitionProbs probs;
  long double beta = 0;
  std::array<long double, 3> m_star_branches{};
  long double m_star_real = 0;
  std::uint64_t M_star = 0;  // ceil(m_star_real)
  bool side_condition_ok = false;
  bool drift_ok = false;  // p_plus > p_minus
  ClampedProbability success_at_m_star;
};

/// beta = (n-b)p / (2(3np)^2).
long double theorem_beta(std::int64_t n, std::int64_t b, long double p);

/// 1 - exp(-(p*)^2 M/2) - exp(-(p+ - p-)^2 M/(16 p*)) - (2/beta) exp(-(n-b)/2),
/// unclamped.
long double theorem_success_expression(const TransitionProbs& tp, long double beta, std::int64_t n,
                                       std::int64_t b, long double M);

/// All logarithms are natural. Flags rather than throws when the side
/// condition n >= 2 log(4/(eps beta)) or the drift condition fails.
BoundParams inconsistency_theorem_params(std::int64_t n, std::int64_t b, long double p,
                                         long double epsilon);

struct PrefixInterval {
  long double lo = 0;
  long double hi = 0;
};

/// (t+1 - c n, t+1); exactly t+1 for n = 1.
PrefixInterval expected_prefix_p1(std::int64_t n, std::int64_t t, long double c);

enum class GrowthRegime { kSparse, kDense };  // p < 4 ln2 / n, otherwise

struct GrowthBound {
  long double growth_term = 0;  // 1 + (1 - (1-p)^n) t
  long double slack_term = 0;
  GrowthRegime regime = GrowthRegime::kSparse;
};

/// Sparse slack c/(np e^{-np}); dense slack c 2np/(1 - 2e^{-np/3}).
/// Throws ArgumentError unless 0 < p < 1.
GrowthBound expected_growth_general_p(std::int64_t n, long double p, std::int64_t t, long double c);

}  // namespace nakasim
