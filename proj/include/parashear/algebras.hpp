#pragma once

#include "parashear/matrix.hpp"

#include <random>
#include <string>
#include <vector>

namespace parashear::lie {

/// Standard basis of sl(n): E_ij (i<j), H_i = E_ii - E_{i+1,i+1}, E_ji (i<j).
/// For n = 2 this is {U, X, V}.
std::vector<SquareMatrix> sl_basis(std::size_t n);

/// Block-diagonal embedding of two bases into gl(n1 + n2).
std::vector<SquareMatrix> direct_sum(const std::vector<SquareMatrix>& a,
                                     const std::vector<SquareMatrix>& b);

/// Superdiagonal of ones.
SquareMatrix regular_nilpotent(std::size_t n);

/// A generator together with the algebra it lives in.
struct AlgebraCase {
  std::string name;
  SquareMatrix generator;
  std::vector<SquareMatrix> basis;
};

/// Named presets: "sl2" (U), "sl3" (regular nilpotent), "sl2sl2" (U + U'),
/// "sl2+0" (U + 0). Throws ConfigError for unknown names.
AlgebraCase preset_algebra(const std::string& name);

/// Random algebra element sum c_i B_i rescaled to Frobenius norm `radius`.
SquareMatrix random_element(const std::vector<SquareMatrix>& basis, double radius, std::mt19937_64& rng);

/// W -> g W g^{-1} with g = expm(b).
SquareMatrix conjugate(const SquareMatrix& w, const SquareMatrix& b);

}  // namespace parashear::lie
