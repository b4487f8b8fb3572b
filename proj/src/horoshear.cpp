#include "parashear/horoshear.hpp"

#include "parashear/error.hpp"
#include "parashear/parallel.hpp"
#include "parashear/flow.hpp"
#include "parashear/lie.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace parashear::horo {

namespace {

const lie::Sl2Triple& triple() {
  static const lie::Sl2Triple t = lie::Sl2Triple::canonical();
  return t;
}

SquareMatrix horocycle(double t) { return SquareMatrix{{1.0, t}, {0.0, 1.0}}; }

}  // namespace

SquareMatrix uxv_matrix(const UXVCoords& k) {
  const auto& s = triple();
  return lie::expm(k.a * s.U) * lie::expm(k.b * s.X) * lie::expm(k.c * s.V);
}

UXVCoords uxv_decompose(const SquareMatrix& x, const SquareMatrix& y) {
  require_same_dim(x, y, "uxv_decompose");
  if (x.dim() != 2) throw DimensionMismatch("uxv_decompose: expects 2x2 matrices");
  const auto m = y * x.inverse();
  const double m22 = m(1, 1);
  if (!(m22 > 0.0)) {
    std::ostringstream msg;
    msg << "uxv_decompose: m22 = " << m22 << " <= 0, outside the UXV chart";
    throw OutOfChart(msg.str());
  }
  return {m(0, 1) / m22, -std::log(m22), m(1, 0) / m22};
}

double chi(double t, double b, double c) {
  return std::exp(-2.0 * b) * t - std::exp(-3.0 * b) * c * t * t;
}

double shear_offset(double t, double b, double c) {
  return std::expm1(-2.0 * b) * t - std::exp(-3.0 * b) * c * t * t;
}

double quadratic_sup(double b1, double b2, double b3, double T) {
  const auto p = [&](double t) { return b1 + t * (b2 + t * b3); };
  double best = std::max(std::abs(p(0.0)), std::abs(p(T)));
  if (b3 != 0.0) {
    const double v = -b2 / (2.0 * b3);
    if (v > 0.0 && v < T) best = std::max(best, std::abs(p(v)));
  }
  return best;
}

namespace {

struct FacePoint {
  double value = std::numeric_limits<double>::infinity();
  double u = 0.0;
  double v = 0.0;
};

// gamma has gamma[face] = 1 and the two other entries (u, v) in [-1, 1].
double face_value(int face, double u, double v, double T) {
  std::array<double, 3> g{};
  g[static_cast<std::size_t>(face)] = 1.0;
  g[static_cast<std::size_t>((face + 1) % 3)] = u;
  g[static_cast<std::size_t>((face + 2) % 3)] = v;
  return quadratic_sup(g[0] / 4.0, g[1] / (4.0 * T), g[2] / (4.0 * T * T), T);
}

FacePoint scan_face(int face, double T, double u0, double v0, double half_width, int n) {
  const int side = 2 * n + 1;
  std::vector<FacePoint> rows(static_cast<std::size_t>(side));
  const double h = half_width / n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < side; ++i) {
    FacePoint best;
    const double u = std::clamp(u0 + (i - n) * h, -1.0, 1.0);
    for (int j = 0; j < side; ++j) {
      const double v = std::clamp(v0 + (j - n) * h, -1.0, 1.0);
      const double val = face_value(face, u, v, T);
      if (val < best.value) best = {val, u, v};
    }
    rows[static_cast<std::size_t>(i)] = best;
  }
  FacePoint best;
  for (const auto& r : rows)
    if (r.value < best.value) best = r;
  return best;
}

double compute_c0(double T) {
  double best = std::numeric_limits<double>::infinity();
  for (int face = 0; face < 3; ++face) {
    FacePoint p = scan_face(face, T, 0.0, 0.0, 1.0, 1000);  // spacing 1e-3
    for (double half = 2e-3; half > 2e-8; half /= 10.0)
      p = scan_face(face, T, p.u, p.v, half, 20);
    best = std::min(best, p.value);
  }
  return best;
}

}  // namespace

double c0_for_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw PreconditionViolated("derive_c0: T must be positive");
  static std::mutex mu;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(T); it != cache.end()) return it->second;
  }
  const double v = compute_c0(T);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(T, v);
  return v;
}

double derive_c0(const std::vector<double>& T_grid) {
  if (T_grid.empty()) throw PreconditionViolated("derive_c0: empty T grid");
  double best = std::numeric_limits<double>::infinity();
  for (double T : T_grid) best = std::min(best, c0_for_horizon(T));
  return best;
}

bool ShearWitness::preconditions_hold() const {
  return std::all_of(preconditions.begin(), preconditions.end(),
                     [](const Precondition& p) { return p.held; });
}

std::pair<double, double> horo_constants(double epsilon, double c0, const HoroConfig& cfg) {
  if (cfg.paper_literal) {
    const double kappa =
        std::min({std::pow(epsilon, 40.0), std::pow(cfg.N_eps, -20.0), cfg.delta_prime});
    return {kappa, std::pow(kappa, 10.0)};
  }
  const double kappa = epsilon * epsilon / 8.0;
  return {kappa, std::min(c0, epsilon) * std::pow(kappa, 4.0) / 8.0};
}

namespace {

// Least positive root of B t^2 + A t - rhs = 0, or +inf.
double least_positive_root(double A, double B, double rhs) {
  const double inf = std::numeric_limits<double>::infinity();
  if (B == 0.0) {
    if (A == 0.0) return inf;
    const double t = rhs / A;
    return t > 0.0 ? t : inf;
  }
  const double disc = A * A + 4.0 * B * rhs;
  if (disc < 0.0) return inf;
  const double q = -0.5 * (A + std::copysign(std::sqrt(disc), A));
  double best = inf;
  const double r1 = q / B;
  if (r1 > 0.0) best = r1;
  if (q != 0.0) {
    const double r2 = -rhs / q;
    if (r2 > 0.0) best = std::min(best, r2);
  }
  return best;
}

}  // namespace

ShearWitness strong_r_witness(double a, double b, double c, double epsilon,
                              const HoroConfig& cfg) {
  if (b == 0.0 && c == 0.0)
    throw DegenerateInput("strong_r_witness: b = c = 0, the points lie on one orbit");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw PreconditionViolated("strong_r_witness: epsilon must lie in (0, 1)");

  ShearWitness w;
  w.epsilon = epsilon;
  w.c0 = cfg.c0 > 0.0 ? cfg.c0 : derive_c0({1.0, 10.0, 100.0});
  std::tie(w.kappa, w.delta) = horo_constants(epsilon, w.c0, cfg);
  w.A = std::expm1(-2.0 * b);
  w.B = -std::exp(-3.0 * b) * c;
  const double inf = std::numeric_limits<double>::infinity();
  w.range = std::min(b != 0.0 ? 1.0 / std::abs(b) : inf, c != 0.0 ? 1.0 / std::sqrt(std::abs(c)) : inf);

  w.preconditions = {{"b^2 + c^2 > 0", true},
                     {"|a| < delta", std::abs(a) < w.delta},
                     {"|b| < delta", std::abs(b) < w.delta},
                     {"|c| < delta", std::abs(c) < w.delta}};

  const double t = std::min(least_positive_root(w.A, w.B, w.c0),
                            least_positive_root(w.A, w.B, -w.c0));
  if (!(t <= w.range)) {
    const double R = w.range;
    const double sup = quadratic_sup(0.0, w.A, w.B, R);
    std::ostringstream msg;
    msg.precision(6);
    msg << "no crossing of |f| = c0 = " << w.c0 << " on [0, " << R << "]: sup|f| = " << sup
        << "; coefficient bounds |A| <= 1/(4R): " << (std::abs(w.A) <= 0.25 / R ? "held" : "failed")
        << " (|A| = " << std::abs(w.A) << "), |B| <= 1/(4R^2): "
        << (std::abs(w.B) <= 0.25 / (R * R) ? "held" : "failed") << " (|B| = " << std::abs(w.B)
        << ")";
    for (const auto& p : w.preconditions)
      if (!p.held) msg << "; violated precondition " << p.name;
    throw NoCrossing(msg.str());
  }
  w.M = t;
  w.preconditions.push_back({"kappa^-2 <= M", 1.0 / (w.kappa * w.kappa) <= w.M});
  return w;
}

double f1_max_deviation(const ShearWitness& w, std::size_t points) {
  const double lo = 1.0 / (w.kappa * w.kappa);
  const double hi = w.M;
  if (!(lo <= hi) || points == 0) return 0.0;
  double worst = 0.0;
  const auto n = static_cast<std::int64_t>(points);
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    const double t = lo * std::pow(hi / lo, u);
    const double dev = quadratic_sup(0.0, w.A + 2.0 * w.B * t, w.B, w.kappa * t);
    worst = std::max(worst, dev);
  }
  return worst;
}

double compensated_bound(const UXVCoords& k, double t) {
  const double at = std::abs(t);
  return kCompBoundConstant * (std::abs(k.a) + std::abs(k.b) + std::abs(k.c) * (1.0 + at) +
                               std::abs(k.b * k.c) * at * at + k.c * k.c * at * at * at);
}

DivergenceSeries verify_horocycle_divergence(const SquareMatrix& x, const UXVCoords& k,
                                             const std::vector<double>& t_grid, bool compensated) {
  if (x.dim() != 2) throw DimensionMismatch("verify_horocycle_divergence: expects 2x2 x");
  const auto y = uxv_matrix(k) * x;
  DivergenceSeries out;
  out.samples.resize(t_grid.size());
  const auto n = static_cast<std::int64_t>(t_grid.size());
  ExceptionSlot err;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    err.run([&] {
      const double t = t_grid[static_cast<std::size_t>(i)];
      const auto hy = horocycle(t) * y;
      DivergenceSample s;
      s.t = t;
      s.d_raw = flow::group_dist(hy, horocycle(t) * x);
      const double tc = chi(t, k.b, k.c);
      s.d_comp = compensated ? flow::group_dist(hy, horocycle(tc) * x) : s.d_raw;
      s.f = tc - t;
      s.bound = compensated_bound(k, t);
      out.samples[static_cast<std::size_t>(i)] = s;
    });
  }
  err.rethrow();
  for (const auto& s : out.samples) {
    out.max_raw = std::max(out.max_raw, s.d_raw);
    out.max_comp = std::max(out.max_comp, s.d_comp);
    const double slack = 1e-14 * (1.0 + s.t) * (1.0 + s.t);
    if (compensated && s.d_comp > s.bound + slack) out.within_bound = false;
  }
  return out;
}

double shifted_distance(const UXVCoords& k, double t, double shift) {
  return shifted_distance(uxv_matrix(k), t, shift);
}

double shifted_distance(const SquareMatrix& m, double t, double shift) {
  const double s = t + shift;
  const double r0 = m(0, 0) + t * m(1, 0);
  const double d00 = r0 - 1.0;
  const double d01 = m(0, 1) + t * m(1, 1) - s * r0;
  const double d10 = m(1, 0);
  const double d11 = m(1, 1) - s * m(1, 0) - 1.0;
  return std::sqrt(d00 * d00 + d01 * d01 + d10 * d10 + d11 * d11);
}

WitnessReport horo_replay(const UXVCoords& k, const ShearWitness& w, std::size_t grid_points,
                          std::size_t samples) {
  if (samples < 2) throw PreconditionViolated("horo_replay: need at least 2 samples");
  WitnessReport r;
  r.experiment = "horo-shear";
  r.epsilon = w.epsilon;
  r.kappa = w.kappa;
  r.inputs = {{"a", k.a}, {"b", k.b}, {"c", k.c}, {"epsilon", w.epsilon}, {"samples", samples}};
  r.M = w.M;
  r.p_M = w.p_of_L(w.M);
  r.terminal_ok = std::abs(*r.p_M) >= w.c0 * (1.0 - 1e-12);
  for (const auto& p : w.preconditions) r.assumptions[p.name] = p.held;
  r.assumptions["time_change_closeness_external"] = true;
  r.residuals["c0"] = w.c0;
  r.residuals["delta"] = w.delta;
  r.residuals["f1_max_deviation"] = f1_max_deviation(w, 200);

  const double lo = 1.0 / (w.kappa * w.kappa);
  if (!(lo <= w.M)) {
    r.notes.push_back("window range [kappa^-2, M] is empty");
    r.finalize();
    return r;
  }
  const std::size_t g = std::max<std::size_t>(grid_points, 2);
  r.windows.resize(g);
  const auto n = static_cast<std::int64_t>(samples);
  const auto m = uxv_matrix(k);
  for (std::size_t i = 0; i < g; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(g - 1);
    const double L = i + 1 == g ? w.M : lo * std::pow(w.M / lo, u);
    const double pL = w.p_of_L(L);
    double worst = 0.0;
    std::int64_t close = 0;
#pragma omp parallel for schedule(static) reduction(max : worst) reduction(+ : close)
    for (std::int64_t j = 0; j < n; ++j) {
      const double t = L + w.kappa * L * static_cast<double>(j) / static_cast<double>(n - 1);
      const double d = shifted_distance(m, t, pL);
      worst = std::max(worst, d);
      if (d < w.epsilon) ++close;
    }
    r.windows[i] = {L, pL, static_cast<double>(close) / static_cast<double>(n), worst, samples};
  }
  r.finalize();
  return r;
}

}  // namespace parashear::horo
