#include "parashear/torus.hpp"

#include <algorithm>
#include <cmath>

namespace parashear::torus {

namespace {

constexpr long double kTwo64 = 18446744073709551616.0L;

}  // namespace

Phase Phase::from_double(double x) {
  double frac = x - std::floor(x);
  if (frac >= 1.0) frac = 0.0;
  // frac has at most 53 significant bits, so frac * 2^128 is exact.
  const long double hi = std::ldexp(static_cast<long double>(frac), 64);
  const auto top = static_cast<std::uint64_t>(hi);
  const long double rest = std::ldexp(hi - static_cast<long double>(top), 64);
  const auto low = static_cast<std::uint64_t>(rest);
  return Phase((static_cast<u128>(top) << 64) | low);
}

Phase Phase::from_real(const cf::Real& x) {
  cf::Real frac = x - floor(x);
  cf::Real scaled = ldexp(frac, 64);
  const cf::Real top_r = floor(scaled);
  const auto top = top_r.convert_to<std::uint64_t>();
  const auto low = floor(ldexp(scaled - top_r, 64)).convert_to<std::uint64_t>();
  return Phase((static_cast<u128>(top) << 64) | low);
}

long double Phase::to_long_double() const noexcept {
  const auto top = static_cast<std::uint64_t>(raw_ >> 64);
  const auto low = static_cast<std::uint64_t>(raw_);
  return (static_cast<long double>(top) + static_cast<long double>(low) / kTwo64) / kTwo64;
}

double Phase::to_double() const noexcept {
  const double v = static_cast<double>(to_long_double());
  return v >= 1.0 ? 0.0 : v;
}

double circle_distance(Phase a, Phase b) {
  const Phase d = a - b;
  const Phase e = b - a;
  return (d.raw() < e.raw() ? d : e).to_double();
}

double circle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

SkewShift make_skew_shift(const cf::Real& alpha, double beta) {
  return {Phase::from_real(alpha), Phase::from_double(beta), alpha};
}

TorusPoint skew_iterate(const SkewShift& ss, std::int64_t n, const TorusPoint& p) {
  const i128 nn = n;
  const i128 tri = nn * (nn - 1) / 2;
  return {p.x + nn * ss.alpha, p.y + nn * p.x + tri * ss.alpha + nn * ss.beta};
}

double torus_distance(const TorusPoint& p, const TorusPoint& q) {
  return std::max(circle_distance(p.x, q.x), circle_distance(p.y, q.y));
}

}  // namespace parashear::torus
