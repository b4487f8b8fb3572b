#include "parashear/continued_fraction.hpp"

#include "parashear/error.hpp"

#include <algorithm>
#include <limits>

namespace parashear::cf {

std::uint64_t ContinuedFraction::max_quotient() const {
  if (partial_quotients.empty()) return 0;
  return *std::max_element(partial_quotients.begin(), partial_quotients.end());
}

namespace {

// Relative precision of Real, about 2^-166.
const Real& unit_roundoff() {
  static const Real eps = std::numeric_limits<Real>::epsilon();
  return eps;
}

ContinuedFraction expand(const Real& alpha, std::size_t depth, bool strict) {
  if (!(alpha > 0 && alpha < 1))
    throw PreconditionViolated("continued_fraction: alpha must lie in (0, 1)");
  ContinuedFraction out;
  out.alpha = alpha;
  out.q.push_back(1);
  std::uint64_t q_prev = 0;
  Real x = alpha;
  // Rounding in x grows like q_n^2 times the unit roundoff.
  const Real budget = Real(1e-6) / unit_roundoff();
  while (out.partial_quotients.size() < depth) {
    if (x == 0) {
      out.terminated = true;
      break;
    }
    const Real q_cur(out.q.back());
    if (q_cur * q_cur > budget) {
      if (!strict) break;
      throw PrecisionExhausted("continued_fraction: depth " + std::to_string(depth) +
                               " exceeds working precision after " +
                               std::to_string(out.partial_quotients.size()) + " quotients");
    }
    x = 1 / x;
    const Real a = floor(x);
    x -= a;
    if (a > Real(std::numeric_limits<std::uint64_t>::max())) {
      if (!strict) break;
      throw PrecisionExhausted("continued_fraction: partial quotient overflows 64 bits");
    }
    const auto ai = a.convert_to<std::uint64_t>();
    const std::uint64_t q = out.q.back();
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(ai, q, &next) || __builtin_add_overflow(next, q_prev, &next)) {
      if (!strict) break;
      throw PrecisionExhausted("continued_fraction: denominator overflows 64 bits");
    }
    out.partial_quotients.push_back(ai);
    q_prev = q;
    out.q.push_back(next);
  }
  return out;
}

}  // namespace

ContinuedFraction continued_fraction(const Real& alpha, std::size_t depth) {
  return expand(alpha, depth, true);
}

ContinuedFraction continued_fraction_partial(const Real& alpha, std::size_t depth) {
  return expand(alpha, depth, false);
}

Real golden() { return (sqrt(Real(5)) - 1) / 2; }

Real parse_alpha(const std::string& text) {
  if (text == "golden") return golden();
  if (text == "sqrt2") return sqrt(Real(2)) - 1;
  try {
    return Real(text);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse alpha '" + text + "'");
  }
}

}  // namespace parashear::cf
