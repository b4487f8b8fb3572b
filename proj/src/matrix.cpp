#include "parashear/matrix.hpp"

#include "parashear/error.hpp"

#include <cmath>
#include <string>

namespace parashear {

SquareMatrix::SquareMatrix(std::size_t dim) : m_(Storage::Zero(dim, dim)) { validate(); }

SquareMatrix::SquareMatrix(Storage m) : m_(std::move(m)) { validate(); }

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = rows.size();
  m_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionMismatch("SquareMatrix: ragged initializer");
    Eigen::Index j = 0;
    for (double v : row) m_(i, j++) = v;
    ++i;
  }
  validate();
}

SquareMatrix SquareMatrix::identity(std::size_t dim) {
  return SquareMatrix(Storage::Identity(dim, dim));
}

SquareMatrix SquareMatrix::from_row_major(std::size_t dim, const std::vector<double>& values) {
  if (values.size() != dim * dim)
    throw DimensionMismatch("from_row_major: expected " + std::to_string(dim * dim) +
                            " entries, got " + std::to_string(values.size()));
  Storage m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];
  return SquareMatrix(std::move(m));
}

void SquareMatrix::validate() const {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("SquareMatrix: not square");
  if (m_.rows() < 2) throw DimensionMismatch("SquareMatrix: dim must be >= 2");
  if (!m_.allFinite()) throw NonFiniteEntries("SquareMatrix: non-finite entry");
}

double SquareMatrix::determinant() const { return m_.determinant(); }

SquareMatrix SquareMatrix::inverse() const {
  if (dim() == 2) {
    const double det = m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0);
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if (!(std::abs(det) > 1e-300 * scale * scale))
      throw SingularMatrix("inverse: singular 2x2 matrix");
    Storage inv(2, 2);
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return SquareMatrix(Storage(inv / det));
  }
  Eigen::FullPivLU<Storage> lu(m_);
  if (!lu.isInvertible()) throw SingularMatrix("inverse: singular matrix");
  return SquareMatrix(Storage(lu.inverse()));
}

std::vector<double> SquareMatrix::row_major() const {
  std::vector<double> out;
  out.reserve(dim() * dim());
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
  return out;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& o) {
  require_same_dim(*this, o, "operator+");
  m_ += o.m_;
  validate();
  return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& o) {
  require_same_dim(*this, o, "operator-");
  m_ -= o.m_;
  validate();
  return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
  m_ *= s;
  validate();
  return *this;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dim(a, b, "operator*");
  return SquareMatrix(SquareMatrix::Storage(a.m_ * b.m_));
}

void require_same_dim(const SquareMatrix& a, const SquareMatrix& b, const char* where) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(where) + ": dimension mismatch (" +
                            std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

double distance(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_dim(a, b, "distance");
  return (a.eigen() - b.eigen()).norm();
}

SquareMatrix block_diag(const SquareMatrix& a, const SquareMatrix& b) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  const auto m = static_cast<Eigen::Index>(b.dim());
  SquareMatrix::Storage out = SquareMatrix::Storage::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = a.eigen();
  out.bottomRightCorner(m, m) = b.eigen();
  return SquareMatrix(std::move(out));
}

}  // namespace parashear
