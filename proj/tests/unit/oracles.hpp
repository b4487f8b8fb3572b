#pragma once

// Reference computations kept independent of the library algorithms.

#include "parashear/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using parashear::SquareMatrix;

// Jordan block sizes of ad_W on span(basis) from ranks of powers.
inline std::vector<int> jordan_lengths(const SquareMatrix& w, const std::vector<SquareMatrix>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto d = static_cast<Eigen::Index>(w.dim());
  Eigen::MatrixXd flat(d * d, n);
  for (Eigen::Index j = 0; j < n; ++j)
    flat.col(j) = Eigen::Map<const Eigen::VectorXd>(basis[static_cast<std::size_t>(j)].eigen().data(), d * d);
  Eigen::MatrixXd ad(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::MatrixXd& b = basis[static_cast<std::size_t>(j)].eigen();
    Eigen::MatrixXd c = w.eigen() * b - b * w.eigen();
    ad.col(j) = flat.colPivHouseholderQr().solve(Eigen::Map<Eigen::VectorXd>(c.data(), d * d));
  }
  std::vector<Eigen::Index> rank{n};
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(1.0, ad.norm());
  double tol = 1e-9;
  while (rank.back() > 0 && static_cast<Eigen::Index>(rank.size()) <= n + 1) {
    p = ad * p;
    tol *= scale;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(p).singularValues();
    rank.push_back(static_cast<Eigen::Index>((sv.array() > tol).count()));
  }
  // blocks of size >= k: rank_{k-1} - rank_k
  std::vector<int> out;
  for (std::size_t k = 1; k < rank.size(); ++k) {
    const auto at_least_k = rank[k - 1] - rank[k];
    const auto at_least_k1 = k + 1 < rank.size() ? rank[k] - rank[k + 1] : 0;
    for (Eigen::Index i = 0; i < at_least_k - at_least_k1; ++i) out.push_back(static_cast<int>(k));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

inline std::int64_t gr(const std::vector<int>& lengths) {
  std::int64_t s = 0;
  for (int l : lengths) s += static_cast<std::int64_t>(l - 1) * l;
  return s / 2;
}

// Plain Taylor series in long double, 256 terms, no scaling.
inline SquareMatrix expm_series(const SquareMatrix& a, int terms = 256) {
  using M = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = static_cast<Eigen::Index>(a.dim());
  M A = a.eigen().cast<long double>();
  M sum = M::Identity(n, n);
  M term = M::Identity(n, n);
  for (int k = 1; k < terms; ++k) {
    term = term * A / static_cast<long double>(k);
    sum += term;
  }
  return SquareMatrix(Eigen::MatrixXd(sum.cast<double>()));
}

// Composite Simpson with a fixed step count.
template <class F>
double simpson(F&& f, double a, double b, int n = 200000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
