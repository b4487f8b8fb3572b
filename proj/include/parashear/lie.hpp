#pragma once

#include "parashear/matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace parashear::lie {

/// Default cap on ||A||_F for the non-nilpotent exponential path.
inline constexpr double kDefaultExpmCap = 50.0;
/// Operator-norm threshold deciding ad_W^k = 0.
inline constexpr double kNilpotencyTol = 1e-10;

/// [A, B] = AB - BA.
SquareMatrix bracket(const SquareMatrix& a, const SquareMatrix& b);

/// Canonical sl(2) triple U = E12, X = diag(1,-1), V = E21.
struct Sl2Triple {
  SquareMatrix U;
  SquareMatrix X;
  SquareMatrix V;

  static Sl2Triple canonical();
};

/// A linearly independent list of matrices and the coordinate map onto its span.
class LieSpan {
 public:
  /// Throws DependentBasis if the smallest singular value of the flattened
  /// basis is below 1e-8 (relative to the largest), DimensionMismatch on mixed dims.
  explicit LieSpan(std::vector<SquareMatrix> basis);

  std::size_t size() const noexcept { return basis_.size(); }
  std::size_t matrix_dim() const noexcept { return basis_.front().dim(); }
  const std::vector<SquareMatrix>& basis() const noexcept { return basis_; }

  /// Least-squares coordinates; `residual` receives ||M - sum c_i B_i||_F.
  Eigen::VectorXd coordinates(const SquareMatrix& m, double* residual = nullptr) const;
  SquareMatrix element(const Eigen::VectorXd& coords) const;

 private:
  std::vector<SquareMatrix> basis_;
  Eigen::MatrixXd flat_;  // dim^2 x n, column j = vec(B_j)
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

/// Matrix of ad_W on the span. Throws PreconditionViolated if ad_W leaves the span.
Eigen::MatrixXd adjoint_matrix(const SquareMatrix& w, const LieSpan& span);

/// Least k with ad_W^k = 0 on the span, or nullopt if none within dim^2 + 1 steps.
std::optional<int> nilpotency_degree(const SquareMatrix& w, const std::vector<SquareMatrix>& ambient_basis);

/// Chain basis of ad_W: every chain is [X_0, ..., X_m] with ad_W X_i = X_{i-1}
/// and ad_W X_0 = 0. Chains are listed longest first.
struct ChainBasis {
  SquareMatrix generator;
  std::vector<std::vector<SquareMatrix>> chains;
  double bracket_residual = 0.0;       // max ||[W, X_i] - X_{i-1}||_F
  double centralizer_residual = 0.0;   // max ||[W, X_0]||_F
  double min_singular_value = 0.0;     // of the coordinate matrix of all chain elements

  std::vector<int> lengths() const;
};

/// Throws NotNilpotent if W is not nilpotent on the span.
ChainBasis chain_basis(const SquareMatrix& w, const std::vector<SquareMatrix>& ambient_basis);

/// GR(W) = 1/2 sum m_n (m_n + 1) over chains of length m_n + 1.
std::int64_t gr_invariant(const ChainBasis& cb);
std::int64_t gr_from_lengths(const std::vector<int>& lengths);

/// Matrix exponential. Nilpotent inputs use the exact finite series (no cap);
/// everything else uses scaling and squaring and throws ExpmOverflow above `cap`.
SquareMatrix expm(const SquareMatrix& a, double cap = kDefaultExpmCap);

/// True if a^dim vanishes to rounding level.
bool is_nilpotent_matrix(const SquareMatrix& a);

}  // namespace parashear::lie
