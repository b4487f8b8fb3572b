#pragma once

#include "parashear/kernels.hpp"
#include "parashear/report.hpp"
#include "parashear/roof.hpp"
#include "parashear/torus.hpp"

#include <cstdint>
#include <vector>

namespace parashear::skew {

using torus::SkewShift;
using torus::TorusPoint;
using roof::RoofFunction;

/// (base, height) with 0 <= s < f(base).
struct SpecialFlowPoint {
  TorusPoint base;
  double s = 0.0;
};

/// S_n(f)(p): sum_{j<n} f(T^j p) for n > 0, 0 for n = 0, -sum_{j=n}^{-1} for n < 0.
double birkhoff_sum(const SkewShift& ss, const RoofFunction& f, std::int64_t n, const TorusPoint& p);

/// Flow for time t: (T^N p, s + t - S_N) with S_N <= s + t < S_{N+1}.
/// Throws PreconditionViolated if p is not a valid point.
SpecialFlowPoint special_flow_evaluate(const SkewShift& ss, const RoofFunction& f, double t,
                                       const SpecialFlowPoint& p);

/// Torus distance plus |s - s'|.
double metric_df(const SpecialFlowPoint& p, const SpecialFlowPoint& q);

struct ShearSample {
  std::int64_t n = 0;
  double a = 0.0;
  double max_abs_so_far = 0.0;
};

struct ShearSeries {
  std::vector<ShearSample> samples;  // every `decimation`-th n plus the last one
  double max_abs = 0.0;
  std::int64_t argmax = 0;
};

/// a_n = S_n(f)(p) - S_n(f)(q) for n <= n_max, streamed in blocks.
ShearSeries shear_sequence(const SkewShift& ss, const RoofFunction& f, const TorusPoint& p,
                           const TorusPoint& q, std::int64_t n_max, std::int64_t decimation = 1);

/// Least-squares slope of log(max_abs_so_far) against log n over samples with n >= n_min.
double fit_growth_exponent(const std::vector<ShearSample>& samples, std::int64_t n_min);

struct ShearSearchOptions {
  double D0 = 1e3;
  double D_max = 1e5;
  double threshold = 1.0;
  bool inclusive = false;  // |a_n| >= threshold instead of >
  std::int64_t max_iterations = std::int64_t{200'000'000};
};

struct FirstShear {
  std::int64_t n0 = 0;
  double T = 0.0;
  double D_used = 0.0;
  double a_at_n0 = 0.0;
  double ratio() const { return static_cast<double>(n0) / T; }
};

/// T = min(|dx|^{-2/3}, |dy|^{-2}).
double shear_time_scale(const TorusPoint& p, const TorusPoint& q);

/// Least n0 with |a_{n0}| > threshold, searched on [0, D T] with D doubling from
/// D0 to D_max and at most max_iterations steps. Throws DegenerateInput if
/// p = q, NotFound (carrying the max |a_n|) otherwise.
FirstShear first_shear_time(const SkewShift& ss, const RoofFunction& f, const TorusPoint& p,
                            const TorusPoint& q, const ShearSearchOptions& opt = {});

struct HeisConfig {
  bool paper_literal = false;
  /// 0 means eps^2 (literal: eps^10).
  double kappa = 0.0;
  /// 0 means 1e-8 (literal: kappa^10).
  double delta = 0.0;
  ShearSearchOptions search{};
  std::size_t grid_points = 20;
  std::size_t window_samples = 1000;
  std::int64_t max_stored = std::int64_t{1} << 25;
  /// Throw WindowFail from lift_strong_r on a failing window.
  bool strict = true;

  double kappa_for(double epsilon) const;
  double delta_for(double epsilon) const;
};

/// Output of the base-level witness, including the prefix tables the lift needs.
struct R1Witness {
  WitnessReport report;
  TorusPoint p;
  TorusPoint q;
  std::int64_t M_prime = 0;
  double T = 0.0;
  double delta = 0.0;
  bool r1a = false;
  bool r1b = false;
  std::vector<double> a;  // a_n, n = 0..a.size()-1
  std::vector<double> S;  // S_n(f)(p)
};

/// M' = least n with |a_n| >= 1; checks, for L' on a log grid over
/// [kappa^{-2}, M'], that T^n p, T^n q stay eps-close and |a_n - a_{L'}| < eps
/// for n in [L', (1 + kappa) L'], and that |a_{M'}| >= 1 - eps^2.
/// Throws PreconditionViolated if d(p, q) > delta; propagates NotFound.
R1Witness heis_r1prime_witness(const SkewShift& ss, const RoofFunction& f, const TorusPoint& p,
                               const TorusPoint& q, double epsilon, const HeisConfig& cfg = {});

/// Lifts a passing base witness to the special flow: M = S_{M'}(p) - s, so that
/// N(x, s, M) = M' (paper_literal: half of that),
/// shift p_L = a_{N(x,s,L)}, window fraction of t in [L, L + kappa L] with
/// d(flow_t p, flow_{t - p_L} p') < eps. Throws DegenerateInput for p = p',
/// WindowFail (when cfg.strict) on the first failing window.
WitnessReport lift_strong_r(const SkewShift& ss, const RoofFunction& f, const SpecialFlowPoint& p,
                            const SpecialFlowPoint& q, double epsilon, const R1Witness& base,
                            const HeisConfig& cfg = {});

}  // namespace parashear::skew
