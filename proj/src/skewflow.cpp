#include "parashear/skewflow.hpp"

#include "parashear/error.hpp"
#include "parashear/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace parashear::skew {

namespace {

constexpr std::int64_t kBlock = std::int64_t{1} << 22;

// Largest index n with table[n] <= h, for a nondecreasing table.
template <class Get>
std::int64_t locate(std::int64_t size, double h, Get get) {
  std::int64_t lo = 0;
  std::int64_t hi = size;  // first index with value > h
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (get(mid) <= h)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo - 1;
}

bool same_point(const TorusPoint& a, const TorusPoint& b) { return a.x == b.x && a.y == b.y; }

}  // namespace

double birkhoff_sum(const SkewShift& ss, const RoofFunction& f, std::int64_t n, const TorusPoint& p) {
  if (n == 0) return 0.0;
  if (n > 0) return kernels::orbit_sum(ss, f, p, 0, n);
  return -kernels::orbit_sum(ss, f, p, n, 0);
}

SpecialFlowPoint special_flow_evaluate(const SkewShift& ss, const RoofFunction& f, double t,
                                       const SpecialFlowPoint& p) {
  if (!std::isfinite(t)) throw PreconditionViolated("special_flow_evaluate: t must be finite");
  const double roof_here = f(p.base);
  if (!(p.s >= 0.0 && p.s < roof_here)) {
    std::ostringstream msg;
    msg << "special_flow_evaluate: height " << p.s << " outside [0, " << roof_here << ")";
    throw PreconditionViolated(msg.str());
  }
  if (t == 0.0) return p;
  const double h = p.s + t;
  std::int64_t N = 0;
  double S_N = 0.0;
  if (h >= 0.0) {
    std::int64_t count = 64;
    std::vector<double> pre;
    for (;;) {
      pre = kernels::orbit_prefix(ss, f, p.base, 0, count);
      if (pre.back() > h) break;
      count *= 2;
    }
    N = locate(count + 1, h, [&](std::int64_t i) { return pre[static_cast<std::size_t>(i)]; });
    S_N = pre[static_cast<std::size_t>(N)];
  } else {
    std::int64_t count = 64;
    std::vector<double> pre;
    for (;;) {
      pre = kernels::orbit_prefix(ss, f, p.base, -count, count);
      if (-pre.back() <= h) break;
      count *= 2;
    }
    // index i <-> N = i - count, S_N = -(pre[count] - pre[i])
    const double total = pre.back();
    const auto S_at = [&](std::int64_t i) { return -(total - pre[static_cast<std::size_t>(i)]); };
    const std::int64_t i = locate(count + 1, h, S_at);
    N = i - count;
    S_N = S_at(i);
  }
  return {torus::skew_iterate(ss, N, p.base), h - S_N};
}

double metric_df(const SpecialFlowPoint& p, const SpecialFlowPoint& q) {
  return torus::torus_distance(p.base, q.base) + std::abs(p.s - q.s);
}

ShearSeries shear_sequence(const SkewShift& ss, const RoofFunction& f, const TorusPoint& p,
                           const TorusPoint& q, std::int64_t n_max, std::int64_t decimation) {
  if (n_max < 0) throw PreconditionViolated("shear_sequence: n_max must be nonnegative");
  if (decimation < 1) throw PreconditionViolated("shear_sequence: decimation must be positive");
  ShearSeries out;
  double offset = 0.0;
  for (std::int64_t start = 0; start < n_max; start += kBlock) {
    const std::int64_t len = std::min(kBlock, n_max - start);
    const auto pre = kernels::difference_prefix(ss, f, p, q, start, len);
    for (std::int64_t i = 1; i <= len; ++i) {
      const std::int64_t n = start + i;
      const double a = offset + pre[static_cast<std::size_t>(i)];
      if (std::abs(a) > out.max_abs) {
        out.max_abs = std::abs(a);
        out.argmax = n;
      }
      if (n % decimation == 0 || n == n_max) out.samples.push_back({n, a, out.max_abs});
    }
    offset += pre.back();
  }
  return out;
}

double fit_growth_exponent(const std::vector<ShearSample>& samples, std::int64_t n_min) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (const auto& s : samples) {
    if (s.n < n_min || !(s.max_abs_so_far > 0.0)) continue;
    const double x = std::log(static_cast<double>(s.n));
    const double y = std::log(s.max_abs_so_far);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 2) throw PreconditionViolated("fit_growth_exponent: need at least two samples");
  const double kn = static_cast<double>(k);
  const double den = kn * sxx - sx * sx;
  if (den == 0.0) throw PreconditionViolated("fit_growth_exponent: degenerate abscissae");
  return (kn * sxy - sx * sy) / den;
}

double shear_time_scale(const TorusPoint& p, const TorusPoint& q) {
  const double dx = torus::circle_distance(p.x, q.x);
  const double dy = torus::circle_distance(p.y, q.y);
  const double inf = std::numeric_limits<double>::infinity();
  return std::min(dx > 0.0 ? std::pow(dx, -2.0 / 3.0) : inf, dy > 0.0 ? 1.0 / (dy * dy) : inf);
}

FirstShear first_shear_time(const SkewShift& ss, const RoofFunction& f, const TorusPoint& p,
                            const TorusPoint& q, const ShearSearchOptions& opt) {
  if (same_point(p, q)) throw DegenerateInput("first_shear_time: the two base points coincide");
  FirstShear res;
  res.T = shear_time_scale(p, q);
  if (f.is_constant())
    throw NotFound("roof is constant, so a_n vanishes identically (trivial roof, no shearing)", 0.0);

  const double limit_d = std::min(opt.D_max * res.T, static_cast<double>(opt.max_iterations));
  const auto limit = static_cast<std::int64_t>(std::floor(limit_d));
  double offset = 0.0;
  double max_abs = 0.0;
  for (std::int64_t start = 0; start < limit; start += kBlock) {
    const std::int64_t len = std::min(kBlock, limit - start);
    const auto pre = kernels::difference_prefix(ss, f, p, q, start, len);
    for (std::int64_t i = 1; i <= len; ++i) {
      const double a = offset + pre[static_cast<std::size_t>(i)];
      const double mag = std::abs(a);
      max_abs = std::max(max_abs, mag);
      if (opt.inclusive ? mag >= opt.threshold : mag > opt.threshold) {
        res.n0 = start + i;
        res.a_at_n0 = a;
        res.D_used = opt.D0;
        while (res.D_used * res.T < static_cast<double>(res.n0) && res.D_used < opt.D_max)
          res.D_used *= 2.0;
        res.D_used = std::min(res.D_used, opt.D_max);
        return res;
      }
    }
    offset += pre.back();
  }
  std::ostringstream msg;
  msg << "no n <= " << limit << " with |a_n| " << (opt.inclusive ? ">= " : "> ") << opt.threshold
      << " (T = " << res.T << ", D_max T = " << opt.D_max * res.T
      << ", iteration budget = " << opt.max_iterations << "); max |a_n| reached " << max_abs;
  throw NotFound(msg.str(), max_abs);
}

double HeisConfig::kappa_for(double epsilon) const {
  if (kappa > 0.0) return kappa;
  return paper_literal ? std::pow(epsilon, 10.0) : epsilon * epsilon;
}

double HeisConfig::delta_for(double epsilon) const {
  if (delta > 0.0) return delta;
  return paper_literal ? std::pow(kappa_for(epsilon), 10.0) : 1e-8;
}

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g;
  if (!(lo <= hi)) return g;
  if (points < 2 || lo == hi) return {lo};
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    g.push_back(lo * std::pow(hi / lo, u));
  }
  g.back() = hi;
  return g;
}

}  // namespace

R1Witness heis_r1prime_witness(const SkewShift& ss, const RoofFunction& f, const TorusPoint& p,
                               const TorusPoint& q, double epsilon, const HeisConfig& cfg) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw PreconditionViolated("heis_r1prime_witness: epsilon must lie in (0, 1)");
  R1Witness w;
  w.p = p;
  w.q = q;
  const double kappa = cfg.kappa_for(epsilon);
  w.delta = cfg.delta_for(epsilon);
  const double dist = torus::torus_distance(p, q);
  if (dist > w.delta) {
    std::ostringstream msg;
    msg << "heis_r1prime_witness: d(p, q) = " << dist << " exceeds delta = " << w.delta;
    throw PreconditionViolated(msg.str());
  }

  ShearSearchOptions search = cfg.search;
  search.inclusive = true;
  search.threshold = 1.0;
  const auto first = first_shear_time(ss, f, p, q, search);
  w.M_prime = first.n0;
  w.T = first.T;

  // enough for the lift: flow times up to (1 + kappa) S_{M'} plus a shift of
  // size about 1, with S_n between n floor(f) and n ceiling(f)
  const double ratio = f.ceiling() / f.floor();
  const auto stored = static_cast<std::int64_t>(std::ceil(
      (1.0 + kappa) * static_cast<double>(w.M_prime) * ratio + (f.ceiling() + 4.0) / f.floor())) + 2;
  if (stored > cfg.max_stored) {
    std::ostringstream msg;
    msg << "heis_r1prime_witness: M' = " << w.M_prime << " needs " << stored
        << " stored terms, above the limit " << cfg.max_stored;
    throw PreconditionViolated(msg.str());
  }
  w.a = kernels::difference_prefix(ss, f, p, q, 0, stored);
  w.S = kernels::orbit_prefix(ss, f, p, 0, stored);

  WitnessReport& r = w.report;
  r.experiment = "heis-r1prime";
  r.epsilon = epsilon;
  r.kappa = kappa;
  r.inputs = {{"delta", w.delta}, {"d_pq", dist}, {"T", w.T}, {"paper_literal", cfg.paper_literal}};
  r.M = static_cast<double>(w.M_prime);
  r.p_M = w.a[static_cast<std::size_t>(w.M_prime)];

  double max_variation = 0.0;
  double max_torus = 0.0;
  for (double Ld : log_grid(1.0 / (kappa * kappa), static_cast<double>(w.M_prime), cfg.grid_points)) {
    const auto L = static_cast<std::int64_t>(std::llround(Ld));
    const auto hi = static_cast<std::int64_t>(std::floor((1.0 + kappa) * static_cast<double>(L)));
    const std::int64_t span = hi - L + 1;
    const auto n_samples = static_cast<std::int64_t>(
        std::min<std::int64_t>(span, static_cast<std::int64_t>(std::max<std::size_t>(cfg.window_samples, 2))));
    const double qL = w.a[static_cast<std::size_t>(L)];
    WindowRecord rec;
    rec.L = static_cast<double>(L);
    rec.p_L = qL;
    rec.samples = static_cast<std::size_t>(n_samples);
    std::int64_t ok = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
      const std::int64_t n =
          n_samples == 1 ? L : L + (span - 1) * i / (n_samples - 1);
      const double var = std::abs(w.a[static_cast<std::size_t>(n)] - qL);
      const double td = torus::torus_distance(torus::skew_iterate(ss, n, p), torus::skew_iterate(ss, n, q));
      rec.max_distance = std::max(rec.max_distance, var);
      max_torus = std::max(max_torus, td);
      if (var < epsilon && td < epsilon) ++ok;
    }
    rec.fraction = static_cast<double>(ok) / static_cast<double>(n_samples);
    max_variation = std::max(max_variation, rec.max_distance);
    r.windows.push_back(rec);
  }
  if (r.windows.empty()) r.notes.push_back("window range [kappa^-2, M'] is empty");

  w.r1a = std::all_of(r.windows.begin(), r.windows.end(),
                      [](const WindowRecord& x) { return x.fraction == 1.0; });
  w.r1b = std::abs(*r.p_M) >= 1.0 - epsilon * epsilon;
  r.terminal_ok = w.r1b;
  r.residuals["max_window_variation"] = max_variation;
  r.residuals["max_torus_distance"] = max_torus;
  r.residuals["n0_over_T"] = first.ratio();

  const double mean = f.mean();
  const double C0 = std::max(2.0, 3.0 / std::sqrt(mean));
  r.assumptions["C0_hypothesis_M_prime_ge_8C0^2/kappa^2"] =
      static_cast<double>(w.M_prime) >= 8.0 * C0 * C0 / (kappa * kappa);
  r.assumptions["roof_nontrivial_assumed"] = true;
  r.finalize();
  r.pass = r.pass && w.r1a;
  return w;
}

WitnessReport lift_strong_r(const SkewShift& ss, const RoofFunction& f, const SpecialFlowPoint& p,
                            const SpecialFlowPoint& q, double epsilon, const R1Witness& base,
                            const HeisConfig& cfg) {
  if (same_point(p.base, q.base) && p.s == q.s)
    throw DegenerateInput("lift_strong_r: the two special-flow points coincide");
  if (!same_point(p.base, base.p) || !same_point(q.base, base.q))
    throw PreconditionViolated("lift_strong_r: base points differ from the base witness");
  if (!base.report.pass)
    throw PreconditionViolated("lift_strong_r: the base witness does not pass");
  for (const auto* pt : {&p, &q})
    if (!(pt->s >= 0.0 && pt->s < f(pt->base)))
      throw PreconditionViolated("lift_strong_r: height outside [0, f(base))");
  if (std::abs(p.s - q.s) > base.delta)
    throw PreconditionViolated("lift_strong_r: heights differ by more than delta");

  const double kappa = base.report.kappa;
  const auto size = static_cast<std::int64_t>(base.S.size());
  const auto S = [&](std::int64_t n) { return base.S[static_cast<std::size_t>(n)]; };
  const auto Sq = [&](std::int64_t n) {
    return base.S[static_cast<std::size_t>(n)] - base.a[static_cast<std::size_t>(n)];
  };
  const auto checked = [&](std::int64_t n) {
    if (n < 0 || n >= size - 1)
      throw PreconditionViolated("lift_strong_r: flow time leaves the stored orbit table");
    return n;
  };

  WitnessReport r;
  r.experiment = "heis-lift";
  r.epsilon = epsilon;
  r.kappa = kappa;
  // the halved form lands on N(x, s, M) ~ M'/2, where a_N need not be large
  const double M = cfg.paper_literal ? (S(base.M_prime) - p.s) / 2.0 : S(base.M_prime) - p.s;
  r.M = M;
  r.inputs = {{"M_prime", base.M_prime}, {"s", p.s}, {"s_prime", q.s}, {"halved_M", cfg.paper_literal}};

  for (double L : log_grid(1.0 / (kappa * kappa), M, cfg.grid_points)) {
    const std::int64_t NL = checked(locate(size, p.s + L, S));
    const double pL = base.a[static_cast<std::size_t>(NL)];
    const auto n = static_cast<std::int64_t>(std::max<std::size_t>(cfg.window_samples, 2));
    double max_d = 0.0;
    std::int64_t ok = 0;
    ExceptionSlot err;
#pragma omp parallel for schedule(static) reduction(max : max_d) reduction(+ : ok)
    for (std::int64_t i = 0; i < n; ++i) {
      err.run([&] {
        const double t = L + kappa * L * static_cast<double>(i) / static_cast<double>(n - 1);
        const double h1 = p.s + t;
        const std::int64_t N1 = checked(locate(size, h1, S));
        const double h2 = q.s + t - pL;
        const std::int64_t N2 = checked(locate(size, h2, Sq));
        const SpecialFlowPoint a{torus::skew_iterate(ss, N1, p.base), h1 - S(N1)};
        const SpecialFlowPoint b{torus::skew_iterate(ss, N2, q.base), h2 - Sq(N2)};
        const double d = metric_df(a, b);
        max_d = std::max(max_d, d);
        if (d < epsilon) ++ok;
      });
    }
    err.rethrow();
    WindowRecord rec;
    rec.L = L;
    rec.p_L = pL;
    rec.samples = static_cast<std::size_t>(n);
    rec.fraction = static_cast<double>(ok) / static_cast<double>(n);
    rec.max_distance = max_d;
    r.windows.push_back(rec);
  }
  if (r.windows.empty()) r.notes.push_back("window range [kappa^-2, M] is empty");

  const std::int64_t NM = checked(locate(size, p.s + M, S));
  r.p_M = base.a[static_cast<std::size_t>(NM)];
  const double aM = base.a[static_cast<std::size_t>(base.M_prime)];
  r.terminal_ok = std::abs(*r.p_M) >= 0.5 && std::signbit(*r.p_M) == std::signbit(aM);
  r.residuals["a_M_prime"] = aM;
  r.residuals["N_at_M"] = static_cast<double>(NM);
  r.finalize();
  if (cfg.strict) {
    if (const auto* bad = r.first_failing_window()) {
      std::ostringstream msg;
      msg << "lift_strong_r: window at L = " << bad->L << " has fraction " << bad->fraction
          << " < 1 - eps = " << 1.0 - epsilon;
      throw WindowFail(msg.str(), bad->L, bad->fraction);
    }
  }
  return r;
}

}  // namespace parashear::skew
