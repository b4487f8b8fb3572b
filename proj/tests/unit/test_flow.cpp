#include "oracles.hpp"

#include "parashear/algebras.hpp"
#include "parashear/error.hpp"
#include "parashear/flow.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace parashear;
using namespace parashear::flow;

namespace {

const lie::Sl2Triple tri = lie::Sl2Triple::canonical();

TimeChangeSpec sine_tau() {
  TimeChangeSpec s{FlowSpec{tri.U}, [](const SquareMatrix& g) { return 1.0 + 0.1 * std::sin(g(0, 1)); }, 0.9, 1.1};
  return s;
}

}  // namespace

TEST_CASE("flow point") {
  const FlowSpec u{tri.U};
  const SquareMatrix g{{2.0, 1.0}, {1.0, 1.0}};
  CHECK(flow_point(u, 0.0, g) == g);
  CHECK(flow_point(u, 5.0, SquareMatrix::identity(2)) == SquareMatrix{{1.0, 5.0}, {0.0, 1.0}});
  const FlowSpec mixed{0.3 * tri.V + 0.2 * tri.X};
  const auto lhs = flow_point(mixed, 1.3, flow_point(mixed, 2.1, g));
  CHECK(distance(lhs, flow_point(mixed, 3.4, g)) < 1e-10);
  CHECK_THROWS_AS(flow_point(FlowSpec{tri.X}, 100.0, g), ExpmOverflow);
}

TEST_CASE("group distance") {
  const SquareMatrix g{{2.0, 1.0}, {1.0, 1.0}};
  const SquareMatrix h{{1.0, 0.5}, {0.0, 1.0}};
  const SquareMatrix k{{1.0, 0.0}, {-3.0, 1.0}};
  CHECK(group_dist(g, g) < 1e-15);
  CHECK(group_dist(g * k, h * k) == doctest::Approx(group_dist(g, h)).epsilon(1e-14));
  CHECK(group_dist(lie::expm(0.25 * tri.U), SquareMatrix::identity(2)) == 0.25);
  CHECK(group_dist(lie::expm(-0.25 * tri.U), SquareMatrix::identity(2)) == 0.25);
  CHECK_THROWS_AS(group_dist(g, SquareMatrix::identity(3)), DimensionMismatch);
}

TEST_CASE("time change with constant tau") {
  TimeChangeSpec one{FlowSpec{tri.U}, [](const SquareMatrix&) { return 1.0; }, 1.0, 1.0};
  CHECK(time_change_alpha(one, SquareMatrix::identity(2), 7.25) == doctest::Approx(7.25).epsilon(1e-12));
  TimeChangeSpec c{FlowSpec{tri.U}, [](const SquareMatrix&) { return 2.5; }, 2.5, 2.5};
  CHECK(time_change_alpha(c, SquareMatrix::identity(2), 10.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(time_change_alpha(c, SquareMatrix::identity(2), 0.0) == 0.0);
}

TEST_CASE("time change against fixed-step quadrature") {
  const auto spec = sine_tau();
  const auto id = SquareMatrix::identity(2);
  const double alpha = time_change_alpha(spec, id, 10.0);
  // along exp(sU) I the (0,1) entry is s
  const double integral = oracle::simpson([](double s) { return 1.0 + 0.1 * std::sin(s); }, 0.0, alpha);
  CHECK(std::abs(integral - 10.0) < 1e-8);
  CHECK(alpha == doctest::Approx(10.0 + 0.1 * (std::cos(alpha) - 1.0)).epsilon(1e-10));
}

TEST_CASE("time change cocycle and sandwich") {
  const auto spec = sine_tau();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  const SquareMatrix g{{1.0, 0.3}, {0.2, 1.06}};
  for (int i = 0; i < 40; ++i) {
    const double t = u(rng);
    const double s = u(rng);
    const double at = time_change_alpha(spec, g, t);
    const auto moved = flow_point(spec.flow, at, g);
    const double total = time_change_alpha(spec, g, t + s);
    CHECK(std::abs(total - (at + time_change_alpha(spec, moved, s))) < 1e-6);
    CHECK(at >= t / spec.tau_max - 1e-12);
    CHECK(at <= t / spec.tau_min + 1e-12);
  }
}

TEST_CASE("time change errors") {
  TimeChangeSpec bad{FlowSpec{tri.U}, [](const SquareMatrix&) { return 3.0; }, 1.0, 2.0};
  CHECK_THROWS_AS(time_change_alpha(bad, SquareMatrix::identity(2), 1.0), PreconditionViolated);
  TimeChangeSpec rough{FlowSpec{tri.U}, [](const SquareMatrix& g) { return g(0, 1) < 0.5 ? 1.0 : 2.0; }, 1.0, 2.0};
  rough.max_depth = 6;
  CHECK_THROWS_AS(time_change_alpha(rough, SquareMatrix::identity(2), 3.0), QuadratureError);
}

TEST_CASE("orbit csv") {
  std::ostringstream os;
  write_orbit_csv(os, FlowSpec{tri.U}, SquareMatrix::identity(2), {0.0, 2.0});
  CHECK(os.str() == "t,m00,m01,m10,m11\n0,1,0,0,1\n2,1,2,0,1\n");
}
