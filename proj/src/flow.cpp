#include "parashear/flow.hpp"

#include "parashear/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>

namespace parashear::flow {

SquareMatrix flow_point(const FlowSpec& spec, double t, const SquareMatrix& g) {
  require_same_dim(spec.generator, g, "flow_point");
  if (t == 0.0) return g;
  return lie::expm(t * spec.generator, spec.expm_cap) * g;
}

double group_dist(const SquareMatrix& g, const SquareMatrix& h) {
  require_same_dim(g, h, "group_dist");
  const SquareMatrix::Storage d =
      (g * h.inverse()).eigen() - SquareMatrix::Storage::Identity(g.dim(), g.dim());
  return d.norm();
}

namespace {

class TauAlongOrbit {
 public:
  TauAlongOrbit(const TimeChangeSpec& spec, const SquareMatrix& g) : spec_(spec), g_(g) {
    if (!spec.tau) throw PreconditionViolated("time change: tau is not set");
    if (!(spec.tau_min > 0.0) || spec.tau_max < spec.tau_min)
      throw PreconditionViolated("time change: need 0 < tau_min <= tau_max");
  }

  double operator()(double s) const {
    const double v = spec_.tau(flow_point(spec_.flow, s, g_));
    if (!std::isfinite(v) || v < spec_.tau_min || v > spec_.tau_max) {
      std::ostringstream msg;
      msg << "time change: tau(phi_s g) = " << v << " at s = " << s << " outside ["
          << spec_.tau_min << ", " << spec_.tau_max << "]";
      throw PreconditionViolated(msg.str());
    }
    return v;
  }

 private:
  const TimeChangeSpec& spec_;
  const SquareMatrix& g_;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const TauAlongOrbit& f, double a, double fa, double m, double fm, double b,
                double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    std::ostringstream msg;
    msg << "adaptive Simpson did not converge on [" << a << ", " << b << "] (error estimate "
        << std::abs(delta) / 15.0 << ")";
    throw QuadratureError(msg.str());
  }
  return adaptive(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const TauAlongOrbit& f, double a, double b, double tol_per_unit, int max_depth) {
  if (a == b) return 0.0;
  // unit panels keep the first Simpson estimate from aliasing an oscillating tau
  const auto panels = static_cast<std::int64_t>(std::ceil(std::abs(b - a)));
  double sum = 0.0;
  double x0 = a;
  double f0 = f(a);
  for (std::int64_t i = 1; i <= panels; ++i) {
    const double x1 = i == panels ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
    const double f1 = f(x1);
    const double m = 0.5 * (x0 + x1);
    const double fm = f(m);
    const double tol = tol_per_unit * std::abs(x1 - x0);
    sum += adaptive(f, x0, f0, m, fm, x1, f1, simpson(x0, f0, fm, x1, f1), tol, max_depth);
    x0 = x1;
    f0 = f1;
  }
  return sum;
}

}  // namespace

double tau_integral(const TimeChangeSpec& spec, const SquareMatrix& g, double a, double b) {
  const TauAlongOrbit f(spec, g);
  return integrate(f, a, b, spec.quad_tol, spec.max_depth);
}

double time_change_alpha(const TimeChangeSpec& spec, const SquareMatrix& g, double t) {
  if (!std::isfinite(t)) throw PreconditionViolated("time_change_alpha: t must be finite");
  const TauAlongOrbit f(spec, g);
  if (t == 0.0) return 0.0;

  double lo = t > 0 ? t / spec.tau_max : t / spec.tau_min;
  double hi = t > 0 ? t / spec.tau_min : t / spec.tau_max;
  const double target_tol = 1e-10 * std::max(1.0, std::abs(t));

  double cur = 0.0;
  double F_cur = 0.0;
  double a = std::clamp(t / f(0.0), lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double F_a = F_cur + integrate(f, cur, a, spec.quad_tol, spec.max_depth);
    const double res = F_a - t;
    if (std::abs(res) <= target_tol) return a;
    if (res < 0.0)
      lo = a;
    else
      hi = a;
    cur = a;
    F_cur = F_a;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(a))) return a;
    double next = a - res / f(a);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    a = next;
  }
  throw QuadratureError("time_change_alpha: root finding did not converge");
}

void write_orbit_csv(std::ostream& os, const FlowSpec& spec, const SquareMatrix& g,
                     const std::vector<double>& times) {
  const std::size_t n = g.dim();
  os << "t";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) os << ",m" << i << j;
  os << "\n";
  os.precision(17);
  for (double t : times) {
    const auto p = flow_point(spec, t, g);
    os << t;
    for (double v : p.row_major()) os << "," << v;
    os << "\n";
  }
}

}  // namespace parashear::flow
