#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace parashear {

/// Dense real n x n matrix, n >= 2, with finite entries.
///
/// Used for Lie algebra elements and group elements alike. Arithmetic is
/// value-semantic; every result is re-validated for finiteness.
class SquareMatrix {
 public:
  using Storage = Eigen::MatrixXd;

  explicit SquareMatrix(std::size_t dim);
  explicit SquareMatrix(Storage m);
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMatrix identity(std::size_t dim);
  static SquareMatrix zero(std::size_t dim) { return SquareMatrix(dim); }
  /// Row-major entries; throws DimensionMismatch unless values.size() == dim*dim.
  static SquareMatrix from_row_major(std::size_t dim, const std::vector<double>& values);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Storage& eigen() const noexcept { return m_; }

  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }
  double determinant() const;
  /// Throws SingularMatrix if the matrix is numerically singular.
  SquareMatrix inverse() const;
  std::vector<double> row_major() const;

  SquareMatrix& operator+=(const SquareMatrix& o);
  SquareMatrix& operator-=(const SquareMatrix& o);
  SquareMatrix& operator*=(double s);

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator*(SquareMatrix a, double s) { return a *= s; }
  friend SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }
  friend SquareMatrix operator-(SquareMatrix a) { return a *= -1.0; }
  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  void validate() const;

  Storage m_;
};

/// Throws DimensionMismatch unless a and b share a dimension.
void require_same_dim(const SquareMatrix& a, const SquareMatrix& b, const char* where);

/// Frobenius distance ||a - b||_F.
double distance(const SquareMatrix& a, const SquareMatrix& b);

/// Block-diagonal sum a (+) b.
SquareMatrix block_diag(const SquareMatrix& a, const SquareMatrix& b);

}  // namespace parashear
