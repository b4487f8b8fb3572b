#pragma once

#include "parashear/continued_fraction.hpp"

#include <cstdint>

namespace parashear::torus {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

/// A point of R/Z stored as a 128-bit fixed-point fraction; addition and
/// integer multiples wrap exactly.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(u128 raw) : raw_(raw) {}

  /// Reduces x mod 1 first.
  static Phase from_double(double x);
  static Phase from_real(const cf::Real& x);

  constexpr u128 raw() const noexcept { return raw_; }
  /// Value in [0, 1).
  double to_double() const noexcept;
  long double to_long_double() const noexcept;

  friend constexpr Phase operator+(Phase a, Phase b) { return Phase(a.raw_ + b.raw_); }
  friend constexpr Phase operator-(Phase a, Phase b) { return Phase(a.raw_ - b.raw_); }
  friend constexpr Phase operator-(Phase a) { return Phase(u128(0) - a.raw_); }
  /// n * x mod 1 for any signed n.
  friend constexpr Phase operator*(i128 n, Phase a) { return Phase(static_cast<u128>(n) * a.raw_); }
  friend constexpr bool operator==(Phase a, Phase b) { return a.raw_ == b.raw_; }

 private:
  u128 raw_ = 0;
};

/// Distance to the nearest integer of a - b, in [0, 1/2].
double circle_distance(Phase a, Phase b);
/// Same for plain doubles.
double circle_distance(double a, double b);

struct TorusPoint {
  Phase x;
  Phase y;
};

/// T(x, y) = (x + alpha, y + x + beta).
struct SkewShift {
  Phase alpha;
  Phase beta;
  cf::Real alpha_exact;
};

SkewShift make_skew_shift(const cf::Real& alpha, double beta);

/// Closed form T^n(x, y) = (x + n alpha, y + n x + n(n-1)/2 alpha + n beta); n may be negative.
TorusPoint skew_iterate(const SkewShift& ss, std::int64_t n, const TorusPoint& p);

/// One step of T.
inline TorusPoint skew_step(const SkewShift& ss, const TorusPoint& p) {
  return {p.x + ss.alpha, p.y + p.x + ss.beta};
}

/// max of the coordinatewise circle distances.
double torus_distance(const TorusPoint& p, const TorusPoint& q);

}  // namespace parashear::torus
