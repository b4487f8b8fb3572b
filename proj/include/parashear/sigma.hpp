#pragma once

#include "parashear/report.hpp"

#include <string>
#include <vector>

namespace parashear::sigma {

/// Shear function sigma(s, c), uniform in the base point.
class SigmaModel {
 public:
  enum class Kind { Quadratic, Perturbed };

  SigmaModel(Kind kind, double gamma);

  double operator()(double s, double c) const;
  /// sigma(s, c) - s.
  double excess(double s, double c) const;
  double gamma() const noexcept { return gamma_; }
  Kind kind() const noexcept { return kind_; }
  std::string name() const;

 private:
  Kind kind_;
  double gamma_;
};

/// s + c s^2 with gamma = 1/4.
SigmaModel default_sigma();
/// s + c s^2 (1 + 0.1 cs / (1 + |cs|)) with gamma = 0.24.
SigmaModel perturbed_sigma();
/// "default" or "perturbed"; throws ConfigError otherwise.
SigmaModel sigma_by_name(const std::string& name);

/// Window-stability constant kappa'(eps) = eps / 3.
inline double kappa_prime(double epsilon) { return epsilon / 3.0; }

struct AxiomResult {
  std::size_t points = 0;
  std::size_t scaling_failures = 0;
  std::size_t window_failures = 0;
  std::size_t halving_failures = 0;
  std::size_t monotone_failures = 0;
  std::size_t zero_failures = 0;
  double worst_scaling_residual = 0.0;
  double worst_halving_ratio = 0.0;

  bool ok() const {
    return scaling_failures + window_failures + halving_failures + monotone_failures +
               zero_failures ==
           0;
  }
};

/// Checks the five model axioms on a log-spaced (s, c, r) grid with
/// `per_axis` values per axis. Monotonicity and window stability are checked
/// where |s c| <= small_sc.
AxiomResult check_axioms(const SigmaModel& m, std::size_t per_axis, double epsilon,
                         double small_sc = 0.05);

struct CrossingDiagnostics {
  double N = 0.0;
  double r_at_N = 0.0;
  double range_end = 0.0;
  double A_at_range_end = 0.0;
  bool N_at_least_inv_a = true;  // vacuous when a = 0
  double ea_abs_excess = 0.0;    // e^a |sigma(N, c) - N|
  double drift = 0.0;            // |(e^a - 1) N|
  double excess_bound = 0.0;     // (3/2) / gamma
  double drift_bound = 0.0;      // 1 + (3/2) / gamma

  bool excess_ok() const { return ea_abs_excess <= excess_bound; }
  bool drift_ok() const { return drift <= drift_bound; }
};

/// Least N in [0, delta'^2 / (2|c|)] with |e^a sigma(N, c) - N| = 1.
/// Throws PreconditionViolated if |sigma(end) - end| <= 4/gamma or c = 0,
/// NoCrossing if r never reaches 1 on the range.
CrossingDiagnostics find_crossing_N(const SigmaModel& m, double a, double c, double delta_prime);

struct SigmaConfig {
  double delta_prime = 0.5;
  bool paper_literal = false;
  /// 0 means derive from epsilon and gamma.
  double kappa = 0.0;
  std::size_t grid_points = 20;
  std::size_t samples = 200;
};

/// 1/2 min(kappa'(gamma eps / 3), gamma eps^2); literal: gamma eps^20.
double sigma_kappa(const SigmaModel& m, double epsilon, const SigmaConfig& cfg);

/// Witness for the variable shear. b is accepted and ignored.
/// Throws DegenerateInput if a = c = 0.
WitnessReport variable_strong_r_witness(const SigmaModel& m, double a, double b, double c,
                                        double epsilon, const SigmaConfig& cfg = {});

}  // namespace parashear::sigma
