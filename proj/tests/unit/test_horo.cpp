#include "parashear/error.hpp"
#include "parashear/horoshear.hpp"

#include <doctest.h>
#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace parashear;
using namespace parashear::horo;

namespace {

using M2 = Eigen::Matrix<long double, 2, 2>;

M2 uxv_oracle(long double a, long double b, long double c) {
  M2 u, x, v;
  u << 1, a, 0, 1;
  x << std::exp(b), 0, 0, std::exp(-b);
  v << 1, 0, c, 1;
  return u * x * v;
}

M2 horo(long double t) {
  M2 h;
  h << 1, t, 0, 1;
  return h;
}

// ||h_t M h_{-s} - I||_F
double dist_oracle(const UXVCoords& k, long double t, long double s) {
  const M2 p = horo(t) * uxv_oracle(k.a, k.b, k.c) * horo(-s) - M2::Identity();
  return static_cast<double>(p.norm());
}

double brute_c0(double step) {
  // min over the six faces of the box max(4|b_i|) = 1 of sup_[0,1] |p|
  double best = 1.0;
  const int n = static_cast<int>(std::lround(0.5 / step));
  for (int face = 0; face < 3; ++face) {
    for (double sign : {-1.0, 1.0}) {
      for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
          double b[3];
          b[face] = 0.25 * sign;
          b[(face + 1) % 3] = i * step * 0.5;
          b[(face + 2) % 3] = j * step * 0.5;
          double sup = std::max(std::abs(b[0]), std::abs(b[0] + b[1] + b[2]));
          if (b[2] != 0.0) {
            const double v = -b[1] / (2.0 * b[2]);
            if (v > 0.0 && v < 1.0) sup = std::max(sup, std::abs(b[0] + b[1] * v + b[2] * v * v));
          }
          best = std::min(best, sup);
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("uxv chart") {
  const auto I = SquareMatrix::identity(2);
  const auto z = uxv_decompose(I, I);
  CHECK(z.a == 0.0);
  CHECK(z.b == 0.0);
  CHECK(z.c == 0.0);

  const SquareMatrix d(Eigen::Matrix2d{{std::exp(0.1), 0.0}, {0.0, std::exp(-0.1)}});
  const auto k = uxv_decompose(I, d);
  CHECK(std::abs(k.a) < 1e-15);
  CHECK(k.b == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::abs(k.c) < 1e-15);

  const UXVCoords src{0.01, 0.02, 0.03};
  const auto m = uxv_matrix(src);
  const M2 o = uxv_oracle(0.01L, 0.02L, 0.03L);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(m(i, j) - static_cast<double>(o(i, j))) < 1e-15);
  CHECK(std::abs(m.eigen().determinant() - 1.0) < 1e-12);
  const SquareMatrix x(Eigen::Matrix2d{{2.0, 1.0}, {1.0, 1.0}});
  const auto back = uxv_decompose(x, m * x);
  CHECK(std::abs(back.a - src.a) < 1e-12);
  CHECK(std::abs(back.b - src.b) < 1e-12);
  CHECK(std::abs(back.c - src.c) < 1e-12);

  const SquareMatrix flip(Eigen::Matrix2d{{-1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(uxv_decompose(I, flip), OutOfChart);
}

TEST_CASE("shear polynomial") {
  CHECK(chi(7.5, 0.0, 0.0) == 7.5);
  CHECK(chi(0.0, 0.3, 0.2) == 0.0);
  const long double ref = std::exp(-0.002L) * 500.0L - std::exp(-0.003L) * 1e-6L * 250000.0L;
  CHECK(std::abs(chi(500.0, 1e-3, 1e-6) - static_cast<double>(ref)) < 1e-11);
  CHECK(chi(500.0, 1e-3, 1e-6) == doctest::Approx(498.752).epsilon(1e-5));

  CHECK(shear_offset(123.0, 0.0, 0.0) == 0.0);
  CHECK(shear_offset(50.0, 0.01, 0.0) == doctest::Approx(std::expm1(-0.02) * 50.0).epsilon(1e-15));
  const long double off = std::expm1(-2e-4L) * 1e3L + std::exp(-3e-4L) * 1e-1L;
  CHECK(std::abs(shear_offset(1e3, 1e-4, -1e-7) - static_cast<double>(off)) < 1e-14);
  CHECK(shear_offset(1e3, 1e-4, -1e-7) == doctest::Approx(-0.100009997).epsilon(1e-8));
}

TEST_CASE("quadratic sup") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double b1 = u(rng), b2 = u(rng), b3 = u(rng), T = 0.1 + 3.0 * (u(rng) + 1.0);
    double grid = 0.0;
    for (int q = 0; q <= 20000; ++q) {
      const double t = T * q / 20000.0;
      grid = std::max(grid, std::abs(b1 + b2 * t + b3 * t * t));
    }
    const double exact = quadratic_sup(b1, b2, b3, T);
    CHECK(exact >= grid - 1e-14);
    CHECK(exact - grid <= 1e-6 * (1.0 + std::abs(b2) * T + std::abs(b3) * T * T));
  }
}

TEST_CASE("polynomial constant") {
  const double c0 = derive_c0({1.0});
  CHECK(c0 <= 0.25);
  CHECK(c0 == doctest::Approx(1.0 / 32.0).epsilon(1e-9));
  const double oracle = brute_c0(1e-3);
  CHECK(c0 <= oracle + 1e-12);
  CHECK(oracle - c0 < 1e-3);
  CHECK(std::abs(derive_c0({10.0}) - c0) < 1e-6);
  CHECK(std::abs(derive_c0({100.0}) - c0) < 1e-6);
  CHECK(std::abs(derive_c0({1.0, 10.0, 100.0}) - c0) < 1e-6);
}

TEST_CASE("coefficient bounds follow from the sup bound") {
  const double c0 = derive_c0({1.0});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const double T = std::pow(10.0, 2.0 * (u(rng) + 1.0));
    double b1 = u(rng), b2 = u(rng) / T, b3 = u(rng) / (T * T);
    const double scale = c0 / quadratic_sup(b1, b2, b3, T) * (0.5 * (u(rng) + 1.0));
    b1 *= scale;
    b2 *= scale;
    b3 *= scale;
    const double tol = 1.0 + 1e-9;
    if (std::abs(b1) > tol / 4.0 || std::abs(b2) > tol / (4.0 * T) || std::abs(b3) > tol / (4.0 * T * T))
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("witness first crossing") {
  const double c0 = derive_c0({1.0});

  const auto lin = strong_r_witness(0.0, 1e-4, 0.0, 0.1);
  CHECK(lin.M == doctest::Approx(c0 / std::abs(std::expm1(-2e-4))).epsilon(1e-10));
  CHECK(lin.M <= 1e4);

  const auto quad = strong_r_witness(0.0, 0.0, 1e-6, 0.1);
  CHECK(quad.M == doctest::Approx(std::sqrt(c0 / 1e-6)).epsilon(1e-10));

  for (const auto& [b, c] : std::vector<std::pair<double, double>>{
           {1e-4, 0.0}, {0.0, 1e-6}, {1e-5, -1e-8}, {-3e-5, 2e-9}, {2e-6, -4e-12}}) {
    const auto w = strong_r_witness(0.0, b, c, 0.1);
    CHECK(std::abs(w.p_of_L(w.M)) >= c0 * (1.0 - 1e-12));
    CHECK(w.p_of_L(w.M) == doctest::Approx(shear_offset(w.M, b, c)).epsilon(1e-9));
    CHECK(w.M <= w.range * (1.0 + 1e-12));
    double before = 0.0;
    for (int q = 0; q < 20000; ++q) before = std::max(before, std::abs(shear_offset(w.M * q / 20000.0, b, c)));
    CHECK(before < c0);
  }

  CHECK_THROWS_AS(strong_r_witness(0.0, 0.0, 0.0, 0.1), DegenerateInput);
  CHECK_THROWS_AS(strong_r_witness(0.0, 100.0, 0.0, 0.1), NoCrossing);
}

TEST_CASE("window stability along the witness") {
  const auto w = strong_r_witness(0.0, 1e-5, -1e-8, 0.1);
  const double lo = 1.0 / (w.kappa * w.kappa);
  double brute = 0.0;
  if (lo <= w.M) {
    for (int i = 0; i < 1000; ++i) {
      const double t = lo + (w.M - lo) * i / 999.0;
      for (int j = 0; j <= 200; ++j) {
        const double s = w.kappa * t * j / 200.0;
        brute = std::max(brute, std::abs(w.p_of_L(t) - w.p_of_L(t + s)));
      }
    }
  }
  const double f1 = f1_max_deviation(w, 1000);
  CHECK(brute <= 0.1 * 0.1);
  CHECK(f1 <= 0.1 * 0.1);
  CHECK(f1 >= brute - 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double kappa = 0.05;
  const double small = std::pow(kappa, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double b = small * u(rng), c = small * u(rng);
    const double range = std::min(1.0 / std::abs(b), 1.0 / std::sqrt(std::abs(c)));
    const double t = range * 0.5 * (u(rng) + 1.0);
    const double diff = std::abs(shear_offset(t, b, c) - shear_offset(t + kappa * t, b, c));
    const double bound = 3.0 * std::abs(b) * kappa * t + 5.0 * std::abs(c) * kappa * t * t;
    CHECK(diff <= bound * (1.0 + 1e-9));
    CHECK(bound <= 8.0 * kappa);
  }
}

TEST_CASE("horocycle divergence") {
  const SquareMatrix x(Eigen::Matrix2d{{1.0, 0.5}, {0.0, 1.0}});

  const auto zero = verify_horocycle_divergence(x, {0, 0, 0}, {0.0, 10.0, 1e3}, true);
  CHECK(zero.max_comp == 0.0);

  const UXVCoords kb{0.0, 1e-4, 0.0};
  const auto sb = verify_horocycle_divergence(x, kb, {5000.0}, true).samples[0];
  CHECK(sb.d_comp < 10.0 * 1e-4);
  CHECK(sb.d_raw == doctest::Approx(dist_oracle(kb, 5000.0L, 5000.0L)).epsilon(1e-9));
  CHECK(sb.d_raw == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(sb.d_comp == doctest::Approx(dist_oracle(kb, 5000.0L, chi(5000.0, kb.b, kb.c))).epsilon(1e-6));

  const UXVCoords kc{0.0, 0.0, 1e-6};
  const auto sc = verify_horocycle_divergence(x, kc, {1000.0}, true).samples[0];
  CHECK(sc.d_raw >= 0.5);
  CHECK(sc.d_comp < 1e-2);
  CHECK(sc.d_raw == doctest::Approx(dist_oracle(kc, 1000.0L, 1000.0L)).epsilon(1e-9));

  const auto raw_only = verify_horocycle_divergence(x, kc, {1000.0}, false).samples[0];
  CHECK(raw_only.d_comp == raw_only.d_raw);
}

TEST_CASE("compensated bound calibration") {
  // Worst observed D_comp / (bound / C) over the sample below is about 1.40;
  // C = 4 is frozen above it.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SquareMatrix I = SquareMatrix::identity(2);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double scale = std::pow(10.0, -2.0 - 4.0 * 0.5 * (u(rng) + 1.0));
    const UXVCoords k{scale * u(rng), scale * u(rng), scale * scale * u(rng)};
    const double range = std::min(1.0 / std::abs(k.b), 1.0 / std::sqrt(std::abs(k.c)));
    std::vector<double> grid;
    for (int q = 0; q <= 20; ++q) grid.push_back(range * q / 20.0);
    const auto series = verify_horocycle_divergence(I, k, grid, true);
    CHECK(series.within_bound);
    for (const auto& s : series.samples) {
      const double exact = dist_oracle(k, s.t, chi(s.t, k.b, k.c));
      CHECK(std::abs(s.d_comp - exact) <= 1e-9 * (1.0 + s.t * s.t * 1e-6));
      worst = std::max(worst, exact / (s.bound / kCompBoundConstant));
    }
  }
  CHECK(kCompBoundConstant == 4.0);
  CHECK(worst < kCompBoundConstant);
  MESSAGE("worst calibration ratio " << worst);
}

TEST_CASE("shifted distance and replay") {
  const UXVCoords k{1e-6, 1e-5, -1e-8};
  for (double t : {0.0, 10.0, 2500.0}) {
    for (double s : {0.0, -0.02, 0.3}) {
      CHECK(std::abs(shifted_distance(k, t, s) - dist_oracle(k, t, t + s)) < 1e-10);
    }
  }
  const auto w = strong_r_witness(k.a, k.b, k.c, 0.1);
  const auto r = horo_replay(k, w, 20, 200);
  CHECK(r.pass);
  CHECK(r.terminal_ok);
  CHECK(r.assumptions.count("time_change_closeness_external") == 1);
}
