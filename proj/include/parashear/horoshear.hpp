#pragma once

#include "parashear/matrix.hpp"
#include "parashear/report.hpp"

#include <string>
#include <vector>

namespace parashear::horo {

/// y = exp(aU) exp(bX) exp(cV) x.
struct UXVCoords {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// exp(aU) exp(bX) exp(cV).
SquareMatrix uxv_matrix(const UXVCoords& k);

/// Reads (a, b, c) off M = y x^{-1}: b = -ln m22, a = m12/m22, c = m21/m22.
/// Throws OutOfChart when m22 <= 0.
UXVCoords uxv_decompose(const SquareMatrix& x, const SquareMatrix& y);

/// e^{-2b} t - e^{-3b} c t^2.
double chi(double t, double b, double c);

/// chi(t) - t, evaluated with expm1 for the linear coefficient.
double shear_offset(double t, double b, double c);

/// Smallest sup over [0, T] of |p| for p = b1 + b2 t + b3 t^2 with
/// max(4|b1|, 4T|b2|, 4T^2|b3|) = 1. Cached per T.
double c0_for_horizon(double T);

/// Minimum of c0_for_horizon over the grid.
double derive_c0(const std::vector<double>& T_grid);

/// sup over [0, T] of |b1 + b2 t + b3 t^2|, exact.
double quadratic_sup(double b1, double b2, double b3, double T);

struct HoroConfig {
  bool paper_literal = false;
  double N_eps = 10.0;
  double delta_prime = 1e-3;
  /// 0 means derive it.
  double c0 = 0.0;
};

struct Precondition {
  std::string name;
  bool held = false;
};

/// Result of the first-crossing search for f(t) = A t + B t^2.
struct ShearWitness {
  double M = 0.0;
  double c0 = 0.0;
  double kappa = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double A = 0.0;  // e^{-2b} - 1
  double B = 0.0;  // -e^{-3b} c
  double range = 0.0;  // min(1/|b|, |c|^{-1/2})
  std::vector<Precondition> preconditions;

  double p_of_L(double L) const { return A * L + B * L * L; }
  bool preconditions_hold() const;
};

/// Constants (kappa, delta) for a given epsilon and c0.
std::pair<double, double> horo_constants(double epsilon, double c0, const HoroConfig& cfg);

/// Least t in [0, range] with |f(t)| >= c0. Throws DegenerateInput if b = c = 0,
/// NoCrossing (with the bound that held) if |f| stays below c0 on the range.
ShearWitness strong_r_witness(double a, double b, double c, double epsilon,
                              const HoroConfig& cfg = {});

/// max over t in [kappa^{-2}, M] (grid of `points`) and s in [0, kappa t] of
/// |f(t) - f(t + s)|; the inner maximum is exact. Returns 0 if the range is empty.
double f1_max_deviation(const ShearWitness& w, std::size_t points);

struct DivergenceSample {
  double t = 0.0;
  double d_raw = 0.0;
  double d_comp = 0.0;
  double f = 0.0;
  double bound = 0.0;
};

struct DivergenceSeries {
  std::vector<DivergenceSample> samples;
  double max_raw = 0.0;
  double max_comp = 0.0;
  bool within_bound = true;
};

/// Constant in the compensated-distance bound
/// C (|a| + |b| + |c|(1+t) + |bc| t^2 + c^2 t^3).
inline constexpr double kCompBoundConstant = 4.0;
double compensated_bound(const UXVCoords& k, double t);

/// With y = exp(aU)exp(bX)exp(cV) x and h_t = exp(tU):
/// D_raw(t) = d(h_t y, h_t x), D_comp(t) = d(h_t y, h_{chi(t)} x).
/// If compensated is false, D_comp is reported equal to D_raw.
DivergenceSeries verify_horocycle_divergence(const SquareMatrix& x, const UXVCoords& k,
                                             const std::vector<double>& t_grid, bool compensated);

/// d(h_t y, h_{t + shift} x) for y = exp(aU)exp(bX)exp(cV) x, from the
/// entries of h_t M h_{-(t + shift)} directly.
double shifted_distance(const UXVCoords& k, double t, double shift);
/// Same with M = y x^{-1} given.
double shifted_distance(const SquareMatrix& m, double t, double shift);

/// Window replay of a witness: for L on a log grid over [kappa^{-2}, M],
/// fraction of t in [L, L + kappa L] with shifted_distance(k, t, f(L)) < eps.
/// Terminal condition |f(M)| >= c0.
WitnessReport horo_replay(const UXVCoords& k, const ShearWitness& w, std::size_t grid_points,
                          std::size_t samples);

}  // namespace parashear::horo
