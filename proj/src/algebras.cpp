#include "parashear/algebras.hpp"

#include "parashear/error.hpp"
#include "parashear/lie.hpp"

namespace parashear::lie {

namespace {

SquareMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
  SquareMatrix::Storage m = SquareMatrix::Storage::Zero(n, n);
  m(i, j) = 1.0;
  return SquareMatrix(std::move(m));
}

}  // namespace

std::vector<SquareMatrix> sl_basis(std::size_t n) {
  std::vector<SquareMatrix> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(unit(n, i, j));
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(unit(n, i, i) - unit(n, i + 1, i + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(unit(n, j, i));
  return out;
}

std::vector<SquareMatrix> direct_sum(const std::vector<SquareMatrix>& a,
                                     const std::vector<SquareMatrix>& b) {
  const auto za = SquareMatrix::zero(a.front().dim());
  const auto zb = SquareMatrix::zero(b.front().dim());
  std::vector<SquareMatrix> out;
  for (const auto& m : a) out.push_back(block_diag(m, zb));
  for (const auto& m : b) out.push_back(block_diag(za, m));
  return out;
}

SquareMatrix regular_nilpotent(std::size_t n) {
  SquareMatrix::Storage m = SquareMatrix::Storage::Zero(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
  return SquareMatrix(std::move(m));
}

AlgebraCase preset_algebra(const std::string& name) {
  const auto t = Sl2Triple::canonical();
  if (name == "sl2") return {name, t.U, sl_basis(2)};
  if (name == "sl3") return {name, regular_nilpotent(3), sl_basis(3)};
  if (name == "sl2sl2") return {name, block_diag(t.U, t.U), direct_sum(sl_basis(2), sl_basis(2))};
  if (name == "sl2+0")
    return {name, block_diag(t.U, SquareMatrix::zero(2)), direct_sum(sl_basis(2), sl_basis(2))};
  throw ConfigError("unknown algebra preset '" + name + "' (expected sl2, sl3, sl2sl2, sl2+0)");
}

SquareMatrix random_element(const std::vector<SquareMatrix>& basis, double radius,
                            std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SquareMatrix out = SquareMatrix::zero(basis.front().dim());
  for (const auto& b : basis) out += normal(rng) * b;
  const double norm = out.frobenius_norm();
  if (norm == 0.0) return out;
  return out * (radius / norm);
}

SquareMatrix conjugate(const SquareMatrix& w, const SquareMatrix& b) {
  return expm(b) * w * expm(-b);
}

}  // namespace parashear::lie
