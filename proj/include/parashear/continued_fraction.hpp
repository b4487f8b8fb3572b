#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace parashear::cf {

using Real = boost::multiprecision::cpp_bin_float_50;

/// Expansion alpha = [0; a_1, a_2, ...] with convergent denominators q_0 = 1, q_1 = a_1, ...
struct ContinuedFraction {
  Real alpha;
  std::vector<std::uint64_t> partial_quotients;  // a_1, a_2, ...
  std::vector<std::uint64_t> q;                  // q_0, q_1, ...
  bool terminated = false;                       // alpha is rational at working precision

  std::uint64_t max_quotient() const;
  /// All partial quotients <= C.
  bool bounded_type(std::uint64_t C) const { return max_quotient() <= C; }
};

/// Throws PreconditionViolated unless 0 < alpha < 1, PrecisionExhausted if
/// `depth` quotients cannot be resolved at working precision.
ContinuedFraction continued_fraction(const Real& alpha, std::size_t depth);

/// Stops early instead of throwing once precision runs out.
ContinuedFraction continued_fraction_partial(const Real& alpha, std::size_t depth);

/// "golden" = (sqrt 5 - 1)/2, "sqrt2" = sqrt 2 - 1, otherwise a decimal literal.
Real parse_alpha(const std::string& text);

Real golden();

}  // namespace parashear::cf
