#include "parashear/sigma.hpp"

#include "parashear/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace parashear::sigma {

SigmaModel::SigmaModel(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw PreconditionViolated("sigma model: gamma must lie in (0, 1/2)");
}

double SigmaModel::excess(double s, double c) const {
  const double base = c * s * s;
  if (kind_ == Kind::Quadratic) return base;
  const double u = c * s;
  return base * (1.0 + 0.1 * u / (1.0 + std::abs(u)));
}

double SigmaModel::operator()(double s, double c) const { return s + excess(s, c); }

std::string SigmaModel::name() const { return kind_ == Kind::Quadratic ? "default" : "perturbed"; }

SigmaModel default_sigma() { return SigmaModel(SigmaModel::Kind::Quadratic, 0.25); }

SigmaModel perturbed_sigma() { return SigmaModel(SigmaModel::Kind::Perturbed, 0.24); }

SigmaModel sigma_by_name(const std::string& name) {
  if (name == "default") return default_sigma();
  if (name == "perturbed") return perturbed_sigma();
  throw ConfigError("unknown sigma model '" + name + "' (expected default or perturbed)");
}

namespace {

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = lo * std::pow(hi / lo, u);
  }
  return out;
}

}  // namespace

AxiomResult check_axioms(const SigmaModel& m, std::size_t per_axis, double epsilon,
                         double small_sc) {
  AxiomResult res;
  const auto s_grid = logspace(1e-3, 1e6, per_axis);
  std::vector<double> c_grid;
  for (double c : logspace(1e-10, 1e-1, per_axis)) {
    c_grid.push_back(c);
    c_grid.push_back(-c);
  }
  std::vector<double> r_grid(per_axis);
  for (std::size_t i = 0; i < per_axis; ++i)
    r_grid[i] = per_axis == 1 ? 0.0 : -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(per_axis - 1);

  const double kp = kappa_prime(epsilon);
  const double halving_factor = 0.5 - m.gamma();

  for (double c : c_grid) {
    if (m(0.0, c) != 0.0) ++res.zero_failures;
    double prev_abs = -1.0;
    for (double s : s_grid) {
      const double e = m.excess(s, c);
      for (double r : r_grid) {
        ++res.points;
        const double lhs = m(std::exp(r) * s, std::exp(-r) * c);
        const double rhs = std::exp(r) * m(s, c);
        const double resid = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        res.worst_scaling_residual = std::max(res.worst_scaling_residual, resid);
        if (resid > 1e-12) ++res.scaling_failures;
      }
      const double half = std::abs(m.excess(0.5 * s, c));
      if (e != 0.0) res.worst_halving_ratio = std::max(res.worst_halving_ratio, half / std::abs(e));
      if (half > halving_factor * std::abs(e) * (1.0 + 1e-12)) ++res.halving_failures;

      if (std::abs(s * c) <= small_sc) {
        for (double k : {-kp * (1.0 - 1e-9), -0.5 * kp, 0.5 * kp, kp * (1.0 - 1e-9)}) {
          const double shifted = m.excess((1.0 + k) * s, c);
          if (std::abs(e - shifted) > epsilon * std::abs(e) * (1.0 + 1e-12)) ++res.window_failures;
        }
        if (prev_abs >= 0.0 && std::abs(e) < prev_abs * (1.0 - 1e-12)) ++res.monotone_failures;
        prev_abs = std::abs(e);
      }
    }
  }
  return res;
}

CrossingDiagnostics find_crossing_N(const SigmaModel& m, double a, double c, double delta_prime) {
  if (c == 0.0) throw PreconditionViolated("find_crossing_N: c must be nonzero");
  CrossingDiagnostics d;
  d.range_end = delta_prime * delta_prime / (2.0 * std::abs(c));
  d.A_at_range_end = m.excess(d.range_end, c);
  if (!(std::abs(d.A_at_range_end) > 4.0 / m.gamma())) {
    std::ostringstream msg;
    msg << "find_crossing_N: |A(" << d.range_end << ")| = " << std::abs(d.A_at_range_end)
        << " <= 4/gamma = " << 4.0 / m.gamma() << "; c = " << c << " is too large for delta' = "
        << delta_prime;
    throw PreconditionViolated(msg.str());
  }
  const double ea = std::exp(a);
  const double em1 = std::expm1(a);
  const auto r = [&](double N) { return std::abs(em1 * N + ea * m.excess(N, c)); };

  std::vector<double> grid{0.0};
  for (double N = 1.0; N < d.range_end; N *= 2.0) grid.push_back(N);
  grid.push_back(d.range_end);

  double lo = -1.0;
  double hi = -1.0;
  for (std::size_t i = 0; i + 1 < grid.size() && lo < 0.0; ++i) {
    const double x0 = grid[i];
    const double x1 = grid[i + 1];
    if (r(x1) >= 1.0) {
      lo = x0;
      hi = x1;
      break;
    }
    const double xm = 0.5 * (x0 + x1);
    if (r(xm) > std::max(r(x0), r(x1))) {
      constexpr double invphi = 0.6180339887498949;
      double u = x0;
      double v = x1;
      for (int it = 0; it < 200 && v - u > 1e-12 * v; ++it) {
        const double p = v - invphi * (v - u);
        const double q = u + invphi * (v - u);
        if (r(p) > r(q))
          v = q;
        else
          u = p;
      }
      const double peak = 0.5 * (u + v);
      if (r(peak) >= 1.0) {
        lo = x0;
        hi = peak;
      }
    }
  }
  if (lo < 0.0) {
    std::ostringstream msg;
    msg << "find_crossing_N: |e^a sigma(N, c) - N| stays below 1 on [0, " << d.range_end
        << "] for a = " << a << ", c = " << c;
    throw NoCrossing(msg.str());
  }
  double N = hi;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    N = 0.5 * (lo + hi);
    const double v = r(N);
    if (std::abs(v - 1.0) <= 1e-13) break;
    if (v < 1.0)
      lo = N;
    else
      hi = N;
  }
  for (double x : {lo, hi})
    if (std::abs(r(x) - 1.0) < std::abs(r(N) - 1.0)) N = x;
  d.N = N;
  d.r_at_N = r(N);
  d.N_at_least_inv_a = a == 0.0 || N >= 1.0 / std::abs(a);
  d.ea_abs_excess = ea * std::abs(m.excess(N, c));
  d.drift = std::abs(em1 * N);
  d.excess_bound = 1.5 / m.gamma();
  d.drift_bound = 1.0 + 1.5 / m.gamma();
  return d;
}

double sigma_kappa(const SigmaModel& m, double epsilon, const SigmaConfig& cfg) {
  if (cfg.kappa > 0.0) return cfg.kappa;
  const double g = m.gamma();
  const double second = cfg.paper_literal ? g * std::pow(epsilon, 20.0) : g * epsilon * epsilon;
  return 0.5 * std::min(kappa_prime(g * epsilon / 3.0), second);
}

namespace {

WindowRecord sample_window(double L, double kappa, std::size_t samples, double p_L, double bound,
                           const std::function<double(double)>& deviation) {
  WindowRecord w;
  w.L = L;
  w.p_L = p_L;
  w.samples = samples;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = samples == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(samples - 1);
    const double dev = deviation(L + u * kappa * L);
    w.max_distance = std::max(w.max_distance, dev);
    if (dev <= bound) ++ok;
  }
  w.fraction = samples == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(samples);
  return w;
}

}  // namespace

WitnessReport variable_strong_r_witness(const SigmaModel& m, double a, double b, double c,
                                        double epsilon, const SigmaConfig& cfg) {
  if (a == 0.0 && c == 0.0) throw DegenerateInput("variable_strong_r_witness: a = c = 0, same orbit");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw PreconditionViolated("variable_strong_r_witness: epsilon must lie in (0, 1)");

  WitnessReport r;
  r.experiment = "sigma-model";
  r.epsilon = epsilon;
  r.kappa = sigma_kappa(m, epsilon, cfg);
  r.inputs = {{"a", a},         {"b", b},
              {"c", c},         {"epsilon", epsilon},
              {"model", m.name()}, {"gamma", m.gamma()},
              {"delta_prime", cfg.delta_prime}, {"paper_literal", cfg.paper_literal}};
  r.notes.push_back("coordinate b does not enter the witness");

  const double ea = std::exp(a);
  const double em1 = std::expm1(a);
  std::function<double(double)> g;
  double M = 0.0;
  double bound = 0.0;
  if (c == 0.0) {
    M = 1.0 / std::abs(em1);
    g = [em1](double t) { return em1 * t; };
    bound = 2.0 * r.kappa;
  } else {
    const auto d = find_crossing_N(m, a, c, cfg.delta_prime);
    M = d.N;
    g = [&m, ea, em1, c](double t) { return em1 * t + ea * m.excess(t, c); };
    bound = 2.0 * epsilon / 3.0;
    r.residuals["r_at_N"] = d.r_at_N;
    r.residuals["ea_abs_excess"] = d.ea_abs_excess;
    r.residuals["drift"] = d.drift;
    r.assumptions["N_at_least_inv_a"] = d.N_at_least_inv_a;
    r.assumptions["excess_bound_holds"] = d.excess_ok();
    r.assumptions["drift_bound_holds"] = d.drift_ok();
  }
  r.M = M;
  r.p_M = g(M);
  r.terminal_ok = std::abs(std::abs(*r.p_M) - 1.0) <= 1e-9;

  const double lo = 1.0 / (r.kappa * r.kappa);
  if (lo <= M) {
    const std::size_t n = std::max<std::size_t>(cfg.grid_points, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(n - 1);
      const double L = lo * std::pow(M / lo, u);
      const double pL = g(L);
      r.windows.push_back(sample_window(L, r.kappa, cfg.samples, pL, bound,
                                        [&](double t) { return std::abs(g(t) - pL); }));
    }
  } else {
    r.notes.push_back("window range [kappa^-2, M] is empty");
  }
  r.finalize();
  return r;
}

}  // namespace parashear::sigma
