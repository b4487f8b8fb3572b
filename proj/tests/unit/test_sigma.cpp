#include "parashear/error.hpp"
#include "parashear/sigma.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace parashear;
using namespace parashear::sigma;

namespace {

// |(e^a - 1) N + e^a c N^2| for the quadratic model, long double.
long double r_quadratic(long double a, long double c, long double N) {
  return std::fabs(std::expm1(a) * N + std::exp(a) * c * N * N);
}

// First grid point where r reaches 1, refined by plain bisection.
double scan_crossing(double a, double c, double end) {
  const int n = 1000000;
  long double prev = 0.0L;
  for (int i = 1; i <= n; ++i) {
    const long double N = static_cast<long double>(end) * i / n;
    if (r_quadratic(a, c, N) >= 1.0L) {
      long double lo = prev, hi = N;
      for (int k = 0; k < 200; ++k) {
        const long double mid = 0.5L * (lo + hi);
        (r_quadratic(a, c, mid) >= 1.0L ? hi : lo) = mid;
      }
      return static_cast<double>(hi);
    }
    prev = N;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("sigma models") {
  const auto q = default_sigma();
  CHECK(q.gamma() == 0.25);
  CHECK(q(3.5, 0.0) == 3.5);
  CHECK(q(2.0, 0.1) == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(q(0.0, 0.7) == 0.0);
  CHECK(q.excess(2.0, 0.1) == doctest::Approx(0.4).epsilon(1e-14));
  for (double s : {0.5, 3.0, 100.0}) {
    for (double c : {1e-6, -0.3, 2.0}) {
      CHECK(q.excess(s / 2.0, c) / q.excess(s, c) == doctest::Approx(0.25).epsilon(1e-14));
    }
  }
  const auto p = perturbed_sigma();
  CHECK(p.gamma() == 0.24);
  CHECK(p(0.0, 1.0) == 0.0);
  CHECK(sigma_by_name("default").kind() == SigmaModel::Kind::Quadratic);
  CHECK(sigma_by_name("perturbed").kind() == SigmaModel::Kind::Perturbed);
  CHECK_THROWS_AS(sigma_by_name("cubic"), ConfigError);
}

TEST_CASE("sigma scaling property") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& m : {default_sigma(), perturbed_sigma()}) {
    for (int i = 0; i < 2000; ++i) {
      const double s = std::pow(10.0, 3.0 * u(rng)), c = 0.1 * u(rng), r = 3.0 * u(rng);
      const double lhs = m(std::exp(r) * s, std::exp(-r) * c);
      const double rhs = std::exp(r) * m(s, c);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs) + 1e-300);
    }
  }
}

TEST_CASE("sigma axioms on a grid") {
  for (const auto& m : {default_sigma(), perturbed_sigma()}) {
    const auto res = check_axioms(m, 22, 0.1);
    CHECK(res.points >= 10000);
    CHECK(res.ok());
    CHECK(res.worst_halving_ratio <= 0.5 - m.gamma() + 1e-12);
  }
  CHECK(check_axioms(default_sigma(), 22, 0.1).worst_halving_ratio == doctest::Approx(0.25).epsilon(1e-12));
  // the perturbed model is rejected at gamma = 1/4
  const SigmaModel tight(SigmaModel::Kind::Perturbed, 0.25);
  CHECK(check_axioms(tight, 22, 0.1).halving_failures > 0);
}

TEST_CASE("crossing search") {
  const auto q = default_sigma();
  for (double c : {1e-6, -4e-8, 2.5e-5}) {
    const auto d = find_crossing_N(q, 0.0, c, 0.5);
    CHECK(d.N == doctest::Approx(1.0 / std::sqrt(std::abs(c))).epsilon(1e-10));
    CHECK(d.ea_abs_excess == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.excess_ok());
    CHECK(d.drift_ok());
    CHECK(d.excess_bound == 6.0);
  }

  const auto d = find_crossing_N(q, 1e-4, 1e-8, 0.5);
  const double oracle = scan_crossing(1e-4, 1e-8, d.range_end);
  CHECK(d.N == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::abs(d.r_at_N - 1.0) <= 1e-9);
  CHECK(d.N_at_least_inv_a == (d.N >= 1e4));

  CHECK_THROWS_AS(find_crossing_N(q, 0.0, 1e-2, 0.5), PreconditionViolated);
  CHECK_THROWS_AS(find_crossing_N(q, 1e-3, 0.0, 0.5), PreconditionViolated);
}

TEST_CASE("crossing diagnostics on random inputs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto q = default_sigma();
  std::size_t steep = 0, steep_ok = 0, same = 0, same_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const double c = std::copysign(std::pow(10.0, -5.0 - 4.0 * 0.5 * (u(rng) + 1.0)), u(rng));
    const double a = 4.0 * std::sqrt(std::abs(c)) * u(rng);
    const auto d = find_crossing_N(q, a, c, 0.5);
    CHECK(std::abs(d.r_at_N - 1.0) <= 1e-9);
    CHECK(d.excess_ok());
    CHECK(d.drift_ok());
    // N >= 1/|a| holds exactly when the linear term dominates and the quadratic term opposes it
    if (a * c < 0.0 && a * a >= 4.0 * std::abs(c)) {
      ++steep;
      if (d.N_at_least_inv_a) ++steep_ok;
    }
    if (a * c > 0.0) {
      ++same;
      if (d.N_at_least_inv_a) ++same_ok;
    }
  }
  CHECK(steep > 0);
  CHECK(steep_ok == steep);
  CHECK(same > 0);
  CHECK(same_ok == 0);
}

TEST_CASE("variable shear witness") {
  const auto q = default_sigma();
  SigmaConfig cfg;
  cfg.kappa = 1e-2;
  const auto lin = variable_strong_r_witness(q, 1e-3, 0.0, 0.0, 0.1, cfg);
  CHECK(*lin.M == doctest::Approx(1.0 / std::expm1(1e-3)).epsilon(1e-14));
  CHECK(*lin.M == doctest::Approx(999.5).epsilon(1e-6));
  CHECK(*lin.p_M == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lin.pass);

  const auto quad = variable_strong_r_witness(q, 0.0, 0.3, 1e-6, 0.1);
  CHECK(*quad.M == doctest::Approx(1e3).epsilon(1e-10));
  CHECK(*quad.p_M == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(quad.pass);
  for (const auto& w : quad.windows) {
    CHECK(w.p_L == doctest::Approx(1e-6 * w.L * w.L).epsilon(1e-12));
    CHECK(w.max_distance <= 2.0 * quad.kappa * 1e-6 * w.L * w.L * (1.0 + quad.kappa) + 1e-15);
    CHECK(w.max_distance < 2.0 * 0.1 / 3.0);
  }

  const auto pert = variable_strong_r_witness(perturbed_sigma(), 2e-5, 0.0, -3e-9, 0.1);
  CHECK(pert.pass);

  CHECK_THROWS_AS(variable_strong_r_witness(q, 0.0, 0.5, 0.0, 0.1), DegenerateInput);
}
