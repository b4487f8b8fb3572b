#pragma once

#include "parashear/torus.hpp"

#include <array>
#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace parashear::roof {

using Mode = std::pair<int, int>;

/// Real trigonometric polynomial f(x, y) = sum c_{m,n} e(m x + n y), e(t) = exp(2 pi i t),
/// bounded below by a positive constant.
class RoofFunction {
 public:
  /// Throws PreconditionViolated if the coefficients are not conjugate
  /// symmetric or the certified lower bound is not positive.
  explicit RoofFunction(std::map<Mode, std::complex<double>> coeffs);

  double operator()(double x, double y) const;
  double operator()(const torus::TorusPoint& p) const;

  const std::map<Mode, std::complex<double>>& coefficients() const noexcept { return coeffs_; }
  /// Certified lower bound (dense grid minimum minus a Lipschitz margin).
  double floor() const noexcept { return floor_; }
  /// Certified upper bound.
  double ceiling() const noexcept { return ceiling_; }
  /// c_{0,0}, the integral over the torus.
  double mean() const;
  bool is_constant() const;
  int max_degree() const noexcept { return degree_; }

  /// Coefficients with nonnegative n-index packed for phase evaluation:
  /// f = Re sum_k w_k ex^{m_k} ey^{n_k} where w_k absorbs the conjugate partner.
  struct Term {
    int m;
    int n;
    std::complex<double> w;
  };
  const std::vector<Term>& half_terms() const noexcept { return half_; }

 private:
  std::map<Mode, std::complex<double>> coeffs_;
  std::vector<Term> half_;
  double floor_ = 0.0;
  double ceiling_ = 0.0;
  int degree_ = 0;
};

/// 1 + 0.2 cos(2 pi y) + 0.1 sin(2 pi x).
RoofFunction default_roof();
RoofFunction constant_roof(double value);
/// Rows (m, n, re, im); the conjugate partner of each row must be present.
RoofFunction roof_from_rows(const std::vector<std::array<double, 4>>& rows);

/// (sum |c_{m,n}|^2 (1 + m^2 + n^2)^s)^{1/2}.
double sobolev_norm(const RoofFunction& f, double s);

}  // namespace parashear::roof
