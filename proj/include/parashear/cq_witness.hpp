#pragma once

#include "parashear/lie.hpp"
#include "parashear/matrix.hpp"
#include "parashear/report.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace parashear::cq {

/// Shift schedule for the centralizer-direction witness.
///
/// kappa = eps^2, delta = eps^4 / (10 N), k = ceil(1 / delta).
struct CqSchedule {
  double epsilon = 0.0;
  std::int64_t N = 0;
  double kappa = 0.0;
  double delta = 0.0;
  std::int64_t k = 0;
  SquareMatrix U;
  SquareMatrix X0;
  SquareMatrix X1;

  /// Lower end kappa^{-2} of the admissible L range.
  double L_min() const { return 1.0 / (kappa * kappa); }
  /// Shift parameter of S_L, i.e. -L/k.
  double shift(double L) const { return -L / static_cast<double>(k); }
};

/// Validates the chain relations and fills in the derived constants.
/// Throws PreconditionViolated on bad epsilon/N or broken relations.
CqSchedule make_schedule(double epsilon, std::int64_t N, const SquareMatrix& U,
                         const SquareMatrix& X0, const SquareMatrix& X1);

/// Bottom pair (X_0, X_1) of the first chain of length >= 2 whose X_0 is
/// independent of U. Throws NoQualifyingChain when GR <= 3 or no chain qualifies.
std::pair<SquareMatrix, SquareMatrix> select_noncentral_chain(const lie::ChainBasis& cb,
                                                              const SquareMatrix& U);

/// ||e^{tU} e^{X1/k} e^{-tU} - e^{X1/k + (t/k) X0}||_F.
double verify_commutation(const SquareMatrix& U, const SquareMatrix& X0, const SquareMatrix& X1,
                          double t, std::int64_t k);

/// e^{tU} Y e^{-tU} as the finite series sum t^j/j! ad_U^j Y.
SquareMatrix adjoint_action(const SquareMatrix& U, double t, const SquareMatrix& Y);

/// D(t) = group_dist(e^{tU} y, e^{-(L/k) X0} e^{tU} y') with y' = e^{X1/k} y,
/// evaluated through the adjoint series (independent of y by right invariance).
double window_distance(const CqSchedule& s, double L, double t);

/// Same quantity by explicit matrix products; loses precision once e^{tU} is large.
double window_distance_direct(const CqSchedule& s, const SquareMatrix& y, double L, double t);

/// Samples t uniformly on [L, L + kappa L] (endpoints included).
/// Throws WindowOutOfRange if L > k.
WindowRecord cq_window_check(const CqSchedule& s, double L, std::size_t samples);

/// Log-spaced L grid over [kappa^{-2}, k] with both ends included.
std::vector<double> default_L_grid(const CqSchedule& s, std::size_t points);

/// Full replay over an L grid; the terminal condition is S_k = psi_{-1}.
WitnessReport cq_replay(const CqSchedule& s, const std::vector<double>& L_grid,
                        std::size_t samples);

}  // namespace parashear::cq
