#pragma once

#include "parashear/lie.hpp"
#include "parashear/matrix.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace parashear::flow {

/// One-parameter flow g -> exp(tW) g.
struct FlowSpec {
  SquareMatrix generator;
  double expm_cap = lie::kDefaultExpmCap;

  std::size_t dim() const noexcept { return generator.dim(); }
};

/// exp(tW) g. Throws ExpmOverflow when ||tW|| exceeds the cap (non-nilpotent W only).
SquareMatrix flow_point(const FlowSpec& spec, double t, const SquareMatrix& g);

/// ||g h^{-1} - I||_F. Exactly right-invariant.
double group_dist(const SquareMatrix& g, const SquareMatrix& h);

using TauFunction = std::function<double(const SquareMatrix&)>;

/// Time change of a flow by a positive function tau.
struct TimeChangeSpec {
  FlowSpec flow;
  TauFunction tau;
  double tau_min = 1.0;
  double tau_max = 1.0;
  /// Adaptive Simpson tolerance per unit time.
  double quad_tol = 1e-10;
  /// Recursion depth limit for adaptive Simpson.
  int max_depth = 48;
};

/// Integral of tau(phi_s g) over s in [a, b] (signed).
double tau_integral(const TimeChangeSpec& spec, const SquareMatrix& g, double a, double b);

/// alpha with  int_0^alpha tau(phi_s g) ds = t  to 1e-8.
/// Throws QuadratureError if the integrand cannot be resolved and
/// PreconditionViolated if tau leaves [tau_min, tau_max].
double time_change_alpha(const TimeChangeSpec& spec, const SquareMatrix& g, double t);

/// CSV rows "t,m00,m01,..." for exp(tW) g at each t, with a header row.
void write_orbit_csv(std::ostream& os, const FlowSpec& spec, const SquareMatrix& g,
                     const std::vector<double>& times);

}  // namespace parashear::flow
