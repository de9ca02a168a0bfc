#include "nakasim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nakasim/errors.hpp"

namespace nakasim {

namespace {

void check_nb(std::int64_t n, std::int64_t b) {
  if (n < 1 || b < 0 || b >= n) throw ArgumentError("need 0 <= b < n and n >= 1");
}

// (1-p)^k without cancellation.
long double pow_q(long double p, std::int64_t k) {
  return std::exp(static_cast<long double>(k) * std::log1p(-p));
}

// 1 - (1-p)^k
long double one_minus_pow_q(long double p, std::int64_t k) {
  return -std::expm1(static_cast<long double>(k) * std::log1p(-p));
}

ClampedProbability clamp(long double raw, bool vacuous) {
  ClampedProbability c;
  c.raw = raw;
  c.value = std::clamp(raw, 0.0L, 1.0L);
  c.vacuous = vacuous || raw < 0.0L || raw > 1.0L;
  return c;
}

}  // namespace

Fraction honest_majority_p_bound(std::int64_t n, std::int64_t b) {
  check_nb(n, b);
  std::int64_t num = n - 2 * b;
  std::int64_t den = 2 * (n - b) * (n - b);
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return Fraction{num, den};
}

TransitionProbs transition_probs(std::int64_t n, std::int64_t b, long double p) {
  check_nb(n, b);
  if (!(p >= 0.0L && p <= 1.0L)) throw ArgumentError("p must lie in [0, 1]");
  if (p == 0.0L || p == 1.0L) throw DegenerateInputError("transition_probs: p must lie strictly in (0, 1)");
  if (b == 0) return TransitionProbs{1.0L, 0.0L, 1.0L};
  const long double nonempty = one_minus_pow_q(p, n);
  TransitionProbs t;
  t.p_plus = pow_q(p, b) * one_minus_pow_q(p, n - b) / nonempty;
  t.p_minus = one_minus_pow_q(p, b) * pow_q(p, n - b) / nonempty;
  t.p_star = t.p_plus + t.p_minus;
  return t;
}

std::uint32_t AdvantageProcess::update(std::uint32_t nb, std::uint32_t ab) {
  history_.push_back(update_advantage(history_.back(), nb, ab));
  return history_.back();
}

std::int64_t OpportunityWalk::update(std::uint32_t nb, std::uint32_t ab) {
  if (nb + ab == 0) throw ContractViolation("OpportunityWalk::update called on an empty round");
  std::int64_t j = history_.back();
  if (ab == 0) {
    ++j;
  } else if (nb == 0) {
    --j;
  }
  history_.push_back(j);
  return j;
}

OpportunityBound opportunity_lower_bound(const TransitionProbs& tp, std::uint64_t M) {
  const long double drift = tp.p_plus - tp.p_minus;
  const auto m = static_cast<long double>(M);
  OpportunityBound out;
  out.threshold = drift * m / 4.0L;
  long double raw = 1.0L;
  if (tp.p_star > 0.0L) {
    raw = 1.0L - std::exp(-drift * drift * m / (16.0L * tp.p_star)) -
          std::exp(-tp.p_star * tp.p_star * m / 2.0L);
  }
  out.success = clamp(raw, drift <= 0.0L);
  return out;
}

long double theorem_beta(std::int64_t n, std::int64_t b, long double p) {
  check_nb(n, b);
  const long double np3 = 3.0L * static_cast<long double>(n) * p;
  return static_cast<long double>(n - b) * p / (2.0L * np3 * np3);
}

long double theorem_success_expression(const TransitionProbs& tp, long double beta, std::int64_t n,
                                       std::int64_t b, long double M) {
  const long double drift = tp.p_plus - tp.p_minus;
  return 1.0L - std::exp(-tp.p_star * tp.p_star * M / 2.0L) -
         std::exp(-drift * drift * M / (16.0L * tp.p_star)) -
         (2.0L / beta) * std::exp(-0.5L * static_cast<long double>(n - b));
}

BoundParams inconsistency_theorem_params(std::int64_t n, std::int64_t b, long double p,
                                         long double epsilon) {
  if (!(epsilon > 0.0L && epsilon < 1.0L)) throw ArgumentError("epsilon must lie in (0, 1)");
  BoundParams bp;
  bp.n = n;
  bp.b = b;
  bp.p = p;
  bp.epsilon = epsilon;
  bp.probs = transition_probs(n, b, p);
  bp.beta = theorem_beta(n, b, p);
  const long double drift = bp.probs.p_plus - bp.probs.p_minus;
  const long double ps = bp.probs.p_star;
  bp.drift_ok = drift > 0.0L;
  bp.side_condition_ok = static_cast<long double>(n) >= 2.0L * std::log(4.0L / (epsilon * bp.beta));
  if (bp.drift_ok) {
    bp.m_star_branches[0] = 4.0L * std::log(1.0L / epsilon) / (ps * ps);
    bp.m_star_branches[1] = 4.0L / (bp.beta * drift);
    bp.m_star_branches[2] = 16.0L * ps / (drift * drift) * std::log(4.0L / epsilon);
    bp.m_star_real = *std::max_element(bp.m_star_branches.begin(), bp.m_star_branches.end());
    bp.M_star = static_cast<std::uint64_t>(std::ceil(bp.m_star_real));
    bp.success_at_m_star =
        clamp(theorem_success_expression(bp.probs, bp.beta, n, b, static_cast<long double>(bp.M_star)),
              !bp.side_condition_ok);
  } else {
    bp.m_star_branches.fill(INFINITY);
    bp.m_star_real = INFINITY;
    bp.M_star = UINT64_MAX;
    bp.success_at_m_star = clamp(0.0L, true);
  }
  return bp;
}

PrefixInterval expected_prefix_p1(std::int64_t n, std::int64_t t, long double c) {
  if (n < 1 || t < 1) throw ArgumentError("expected_prefix_p1: need n >= 1 and t >= 1");
  const auto top = static_cast<long double>(t + 1);
  if (n == 1) return {top, top};
  return {top - c * static_cast<long double>(n), top};
}

GrowthBound expected_growth_general_p(std::int64_t n, long double p, std::int64_t t, long double c) {
  if (n < 1 || t < 0) throw ArgumentError("expected_growth_general_p: need n >= 1 and t >= 0");
  if (!(p > 0.0L && p < 1.0L)) throw ArgumentError("expected_growth_general_p: need 0 < p < 1");
  GrowthBound g;
  const auto nn = static_cast<long double>(n);
  const long double np = nn * p;
  g.growth_term = 1.0L + one_minus_pow_q(p, n) * static_cast<long double>(t);
  if (p < 4.0L * std::log(2.0L) / nn) {
    g.regime = GrowthRegime::kSparse;
    g.slack_term = c / (np * std::exp(-np));
  } else {
    g.regime = GrowthRegime::kDense;
    g.slack_term = c * 2.0L * np / (1.0L - 2.0L * std::exp(-np / 3.0L));
  }
  return g;
}

}  // namespace nakasim
