#include "parashear/cq_witness.hpp"

#include "parashear/error.hpp"
#include "parashear/parallel.hpp"
#include "parashear/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace parashear::cq {

namespace {

double inner(const SquareMatrix& a, const SquareMatrix& b) {
  return a.eigen().cwiseProduct(b.eigen()).sum();
}

double parallel_residual(const SquareMatrix& x, const SquareMatrix& u) {
  const double uu = inner(u, u);
  if (uu == 0.0) return x.frobenius_norm();
  return (x - (inner(x, u) / uu) * u).frobenius_norm();
}

bool independent_of(const SquareMatrix& x, const SquareMatrix& u) {
  const double nx = x.frobenius_norm();
  return nx > 0.0 && parallel_residual(x, u) > 1e-8 * nx;
}

}  // namespace

CqSchedule make_schedule(double epsilon, std::int64_t N, const SquareMatrix& U,
                         const SquareMatrix& X0, const SquareMatrix& X1) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw PreconditionViolated("cq schedule: epsilon must lie in (0, 1)");
  if (N < 1) throw PreconditionViolated("cq schedule: N must be positive");
  require_same_dim(U, X0, "cq schedule");
  require_same_dim(U, X1, "cq schedule");

  const double scale = std::max(1.0, U.frobenius_norm() * std::max(X0.frobenius_norm(),
                                                                   X1.frobenius_norm()));
  const double r0 = lie::bracket(U, X0).frobenius_norm();
  const double r1 = (lie::bracket(U, X1) - X0).frobenius_norm();
  if (r0 > 1e-10 * scale || r1 > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "cq schedule: chain relations fail ([U,X0] residual " << r0 << ", [U,X1]-X0 residual "
        << r1 << ")";
    throw PreconditionViolated(msg.str());
  }
  if (!independent_of(X0, U)) throw PreconditionViolated("cq schedule: X0 is a multiple of U");

  CqSchedule s{epsilon, N, epsilon * epsilon, std::pow(epsilon, 4) / (10.0 * static_cast<double>(N)),
               0, U, X0, X1};
  const double inv = 1.0 / s.delta;
  if (!(inv < 9.0e15)) throw PreconditionViolated("cq schedule: k does not fit the index range");
  s.k = static_cast<std::int64_t>(std::ceil(inv));
  return s;
}

std::pair<SquareMatrix, SquareMatrix> select_noncentral_chain(const lie::ChainBasis& cb,
                                                              const SquareMatrix& U) {
  const auto gr = lie::gr_invariant(cb);
  if (gr <= 3) {
    throw NoQualifyingChain("GR = " + std::to_string(gr) +
                            " <= 3: every chain of length >= 2 ends on a multiple of U");
  }
  for (const auto& chain : cb.chains) {
    if (chain.size() < 2) continue;
    if (independent_of(chain[0], U)) return {chain[0], chain[1]};
  }
  throw NoQualifyingChain("no chain of length >= 2 has X0 independent of U");
}

SquareMatrix adjoint_action(const SquareMatrix& U, double t, const SquareMatrix& Y) {
  require_same_dim(U, Y, "adjoint_action");
  const double y_norm = Y.frobenius_norm();
  const double ad_norm = 2.0 * U.frobenius_norm();
  SquareMatrix sum = Y;
  SquareMatrix raw = Y;
  double coeff = 1.0;
  double scale = 1.0;
  const std::size_t max_terms = U.dim() * U.dim() + 1;
  for (std::size_t j = 1; j <= max_terms; ++j) {
    raw = lie::bracket(U, raw);
    scale *= ad_norm;
    if (raw.frobenius_norm() <= 1e-12 * y_norm * scale) break;
    coeff *= t / static_cast<double>(j);
    sum += coeff * raw;
  }
  return sum;
}

double verify_commutation(const SquareMatrix& U, const SquareMatrix& X0, const SquareMatrix& X1,
                          double t, std::int64_t k) {
  if (k < 1) throw PreconditionViolated("verify_commutation: k must be positive");
  const double kd = static_cast<double>(k);
  const auto lhs = lie::expm(t * U) * lie::expm(X1 * (1.0 / kd)) * lie::expm(-t * U);
  const auto rhs = lie::expm(X1 * (1.0 / kd) + X0 * (t / kd));
  return distance(lhs, rhs);
}

double window_distance(const CqSchedule& s, double L, double t) {
  const double kd = static_cast<double>(s.k);
  const auto Z = adjoint_action(s.U, t, s.X1 * (1.0 / kd));
  const auto prod = lie::expm(-Z) * lie::expm(s.X0 * (L / kd));
  return distance(prod, SquareMatrix::identity(prod.dim()));
}

double window_distance_direct(const CqSchedule& s, const SquareMatrix& y, double L, double t) {
  const double kd = static_cast<double>(s.k);
  const flow::FlowSpec along_u{s.U};
  const flow::FlowSpec along_x0{s.X0};
  const auto y_prime = lie::expm(s.X1 * (1.0 / kd)) * y;
  const auto lhs = flow::flow_point(along_u, t, y);
  const auto rhs = flow::flow_point(along_x0, -L / kd, flow::flow_point(along_u, t, y_prime));
  return flow::group_dist(lhs, rhs);
}

WindowRecord cq_window_check(const CqSchedule& s, double L, std::size_t samples) {
  const double kd = static_cast<double>(s.k);
  if (!(L > 0.0) || L > kd * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "L = " << L << " outside (0, k = " << s.k << "]: S_L leaves the compact shift family";
    throw WindowOutOfRange(msg.str());
  }
  if (samples < 2) throw PreconditionViolated("cq_window_check: need at least 2 samples");

  const auto n = static_cast<std::int64_t>(samples);
  const double width = s.kappa * L;
  double max_d = 0.0;
  std::int64_t close = 0;
  ExceptionSlot err;
#pragma omp parallel for schedule(static) reduction(max : max_d) reduction(+ : close)
  for (std::int64_t i = 0; i < n; ++i) {
    err.run([&] {
      const double t = L + width * static_cast<double>(i) / static_cast<double>(n - 1);
      const double d = window_distance(s, L, t);
      max_d = std::max(max_d, d);
      if (d < s.epsilon) ++close;
    });
  }
  err.rethrow();
  WindowRecord w;
  w.L = L;
  w.p_L = s.shift(L);
  w.fraction = static_cast<double>(close) / static_cast<double>(n);
  w.max_distance = max_d;
  w.samples = samples;
  return w;
}

std::vector<double> default_L_grid(const CqSchedule& s, std::size_t points) {
  const double lo = s.L_min();
  const double hi = static_cast<double>(s.k);
  std::vector<double> grid;
  if (points < 2 || !(hi > lo)) return {hi};
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(std::exp(llo + u * (lhi - llo)));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

WitnessReport cq_replay(const CqSchedule& s, const std::vector<double>& L_grid,
                        std::size_t samples) {
  WitnessReport r;
  r.experiment = "cq-verify";
  r.epsilon = s.epsilon;
  r.kappa = s.kappa;
  r.inputs = {{"epsilon", s.epsilon}, {"N", s.N},          {"k", s.k},
              {"delta", s.delta},     {"kappa", s.kappa},  {"samples", samples}};
  bool in_family = true;
  for (double L : L_grid) {
    r.windows.push_back(cq_window_check(s, L, samples));
    in_family = in_family && std::abs(s.shift(L)) <= 2.0;
  }
  const double kd = static_cast<double>(s.k);
  r.M = kd;
  r.p_M = s.shift(kd);
  r.terminal_ok = in_family && std::abs(*r.p_M + 1.0) <= 1e-12;
  r.assumptions["ergodicity_of_shifted_flow_assumed"] = true;
  r.residuals["bracket_U_X0"] = lie::bracket(s.U, s.X0).frobenius_norm();
  r.residuals["bracket_U_X1_minus_X0"] = (lie::bracket(s.U, s.X1) - s.X0).frobenius_norm();
  r.residuals["ad_U_squared_X1"] = lie::bracket(s.U, lie::bracket(s.U, s.X1)).frobenius_norm();
  r.finalize();
  return r;
}

}  // namespace parashear::cq
