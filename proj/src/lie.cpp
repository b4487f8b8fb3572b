#include "parashear/lie.hpp"

#include "parashear/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace parashear::lie {

namespace {

double op_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Orthonormal basis (columns) of ker(m), singular values below tol counted as zero.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = m.cols();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Appends v to the orthonormal column set q if it is independent to `tol`.
bool append_orthonormal(Eigen::MatrixXd& q, Eigen::VectorXd v, double tol) {
  const double scale = v.norm();
  if (scale == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass)
    if (q.cols() > 0) v -= q * (q.transpose() * v);
  const double r = v.norm();
  if (r <= tol * scale) return false;
  q.conservativeResize(v.size(), q.cols() + 1);
  q.col(q.cols() - 1) = v / r;
  return true;
}

Eigen::VectorXd vec(const SquareMatrix& m) {
  const auto& e = m.eigen();
  return Eigen::Map<const Eigen::VectorXd>(e.data(), e.size());
}

}  // namespace

SquareMatrix bracket(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dim(a, b, "bracket");
  return SquareMatrix(SquareMatrix::Storage(a.eigen() * b.eigen() - b.eigen() * a.eigen()));
}

Sl2Triple Sl2Triple::canonical() {
  return {SquareMatrix{{0, 1}, {0, 0}}, SquareMatrix{{1, 0}, {0, -1}}, SquareMatrix{{0, 0}, {1, 0}}};
}

LieSpan::LieSpan(std::vector<SquareMatrix> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw DependentBasis("LieSpan: empty basis");
  const auto d = basis_.front().dim();
  flat_.resize(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    require_same_dim(basis_.front(), basis_[j], "LieSpan");
    flat_.col(static_cast<Eigen::Index>(j)) = vec(basis_[j]);
  }
  if (basis_.size() > d * d) throw DependentBasis("LieSpan: more elements than dim^2");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(flat_);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-8 * sv(0)))
    throw DependentBasis("LieSpan: basis not linearly independent (sigma_min/sigma_max = " +
                         std::to_string(sv(sv.size() - 1) / sv(0)) + ")");
  qr_.compute(flat_);
}

Eigen::VectorXd LieSpan::coordinates(const SquareMatrix& m, double* residual) const {
  if (m.dim() != matrix_dim()) throw DimensionMismatch("LieSpan::coordinates: dimension mismatch");
  const Eigen::VectorXd v = vec(m);
  Eigen::VectorXd c = qr_.solve(v);
  if (residual) *residual = (flat_ * c - v).norm();
  return c;
}

SquareMatrix LieSpan::element(const Eigen::VectorXd& coords) const {
  const auto d = static_cast<Eigen::Index>(matrix_dim());
  Eigen::VectorXd v = flat_ * coords;
  return SquareMatrix(SquareMatrix::Storage(Eigen::Map<Eigen::MatrixXd>(v.data(), d, d)));
}

Eigen::MatrixXd adjoint_matrix(const SquareMatrix& w, const LieSpan& span) {
  const auto n = static_cast<Eigen::Index>(span.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& b = span.basis()[static_cast<std::size_t>(j)];
    const SquareMatrix image = bracket(w, b);
    double residual = 0.0;
    a.col(j) = span.coordinates(image, &residual);
    const double scale = std::max(1.0, w.frobenius_norm() * b.frobenius_norm());
    if (residual > 1e-9 * scale)
      throw PreconditionViolated("adjoint_matrix: ad_W maps basis element " + std::to_string(j) +
                                 " outside the span (residual " + std::to_string(residual) + ")");
  }
  return a;
}

std::optional<int> nilpotency_degree(const SquareMatrix& w,
                                     const std::vector<SquareMatrix>& ambient_basis) {
  const LieSpan span(ambient_basis);
  const Eigen::MatrixXd a = adjoint_matrix(w, span);
  const double scale = std::max(1.0, op_norm(a));
  const auto d = w.dim();
  const int max_iter = static_cast<int>(d * d + 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  double bound = 1.0;
  for (int k = 1; k <= max_iter; ++k) {
    p = a * p;
    bound *= scale;
    if (op_norm(p) <= kNilpotencyTol * bound) return k;
  }
  return std::nullopt;
}

std::vector<int> ChainBasis::lengths() const {
  std::vector<int> out;
  out.reserve(chains.size());
  for (const auto& c : chains) out.push_back(static_cast<int>(c.size()));
  return out;
}

ChainBasis chain_basis(const SquareMatrix& w, const std::vector<SquareMatrix>& ambient_basis) {
  const LieSpan span(ambient_basis);
  require_same_dim(w, ambient_basis.front(), "chain_basis");
  const Eigen::MatrixXd a = adjoint_matrix(w, span);
  const Eigen::Index n = a.rows();
  const double scale = std::max(1.0, op_norm(a));

  // Kernel filtration K_0 = 0 < K_1 < ... < K_depth = whole span.
  std::vector<Eigen::MatrixXd> kernels;
  kernels.emplace_back(n, 0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  double bound = 1.0;
  for (int k = 1;; ++k) {
    p = a * p;
    bound *= scale;
    kernels.push_back(kernel_basis(p, kNilpotencyTol * bound));
    if (kernels.back().cols() == n) break;
    if (k > n) throw NotNilpotent("chain_basis: ad_W is not nilpotent on the span");
  }
  const int depth = static_cast<int>(kernels.size()) - 1;

  struct Top {
    int level;
    Eigen::VectorXd v;
  };
  std::vector<Top> tops;
  for (int j = depth; j >= 1; --j) {
    const Eigen::MatrixXd& kj = kernels[static_cast<std::size_t>(j)];
    const Eigen::MatrixXd& kprev = kernels[static_cast<std::size_t>(j - 1)];
    Eigen::MatrixXd q(n, 0);
    for (Eigen::Index c = 0; c < kprev.cols(); ++c) append_orthonormal(q, kprev.col(c), 1e-8);
    for (const auto& t : tops) {
      Eigen::VectorXd image = t.v;
      for (int s = 0; s < t.level - j; ++s) image = a * image;
      append_orthonormal(q, image, 1e-8);
    }
    const Eigen::Index need = kj.cols() - q.cols();
    if (need < 0) throw NotNilpotent("chain_basis: inconsistent kernel filtration");
    const Eigen::MatrixXd projector = kj * kj.transpose();
    for (Eigen::Index r = 0; r < need; ++r) {
      Eigen::Index best = -1;
      double best_norm = 0.0;
      Eigen::VectorXd best_residual;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd c = projector.col(i);
        if (q.cols() > 0) c -= q * (q.transpose() * c);
        const double norm = c.norm();
        if (norm > best_norm) {
          best_norm = norm;
          best = i;
          best_residual = std::move(c);
        }
      }
      if (best < 0 || best_norm < 1e-8)
        throw NotNilpotent("chain_basis: could not complete level " + std::to_string(j));
      Eigen::VectorXd top = best_residual / best_norm;
      append_orthonormal(q, top, 0.0);
      tops.push_back({j, std::move(top)});
    }
  }

  ChainBasis cb{w, {}, 0.0, 0.0, 0.0};
  Eigen::MatrixXd coords(n, n);
  Eigen::Index col = 0;
  for (const auto& t : tops) {
    std::vector<Eigen::VectorXd> chain(static_cast<std::size_t>(t.level));
    chain.back() = t.v;
    for (int i = t.level - 1; i > 0; --i)
      chain[static_cast<std::size_t>(i - 1)] = a * chain[static_cast<std::size_t>(i)];
    std::vector<SquareMatrix> elems;
    double largest = 0.0;
    for (const auto& c : chain) {
      elems.push_back(span.element(c));
      largest = std::max(largest, elems.back().frobenius_norm());
    }
    for (auto& e : elems) e *= 1.0 / largest;
    for (const auto& c : chain) coords.col(col++) = c / largest;
    cb.chains.push_back(std::move(elems));
  }
  if (col != n) throw NotNilpotent("chain_basis: chains do not span the algebra");

  for (const auto& chain : cb.chains) {
    cb.centralizer_residual =
        std::max(cb.centralizer_residual, bracket(w, chain.front()).frobenius_norm());
    for (std::size_t i = 1; i < chain.size(); ++i)
      cb.bracket_residual =
          std::max(cb.bracket_residual, distance(bracket(w, chain[i]), chain[i - 1]));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
  cb.min_singular_value = svd.singularValues()(n - 1);
  return cb;
}

std::int64_t gr_from_lengths(const std::vector<int>& lengths) {
  std::int64_t twice = 0;
  for (int len : lengths) {
    const std::int64_t m = len - 1;
    twice += m * (m + 1);
  }
  return twice / 2;
}

std::int64_t gr_invariant(const ChainBasis& cb) { return gr_from_lengths(cb.lengths()); }

bool is_nilpotent_matrix(const SquareMatrix& a) {
  const auto n = a.dim();
  const double scale = std::max(1.0, a.frobenius_norm());
  Eigen::MatrixXd p = a.eigen();
  for (std::size_t k = 1; k < n; ++k) p = p * a.eigen();
  return p.norm() <= 1e-14 * std::pow(scale, static_cast<double>(n));
}

SquareMatrix expm(const SquareMatrix& a, double cap) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  if (is_nilpotent_matrix(a)) {
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = term;
    for (Eigen::Index k = 1; k < n; ++k) {
      term = term * a.eigen() / static_cast<double>(k);
      sum += term;
    }
    return SquareMatrix(std::move(sum));
  }
  const double fro = a.frobenius_norm();
  if (fro > cap)
    throw ExpmOverflow("expm: ||A||_F = " + std::to_string(fro) + " exceeds cap " +
                       std::to_string(cap));
  const double norm1 = a.eigen().cwiseAbs().colwise().sum().maxCoeff();
  const int squarings = norm1 > 0.5 ? static_cast<int>(std::ceil(std::log2(norm1 / 0.5))) : 0;
  const Eigen::MatrixXd b = a.eigen() / std::ldexp(1.0, squarings);
  // ||b||_1 <= 1/2: degree 20 leaves a remainder far below double rounding.
  constexpr int kDegree = 20;
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  for (int k = kDegree; k >= 1; --k)
    result = Eigen::MatrixXd::Identity(n, n) + b * result / static_cast<double>(k);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return SquareMatrix(std::move(result));
}

}  // namespace parashear::lie
