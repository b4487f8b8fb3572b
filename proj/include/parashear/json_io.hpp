#pragma once

#include "parashear/algebras.hpp"
#include "parashear/lie.hpp"
#include "parashear/matrix.hpp"

#include <json.hpp>

#include <string>

namespace parashear {

/// Array of rows.
nlohmann::json matrix_to_json(const SquareMatrix& m);
/// Throws ConfigError unless j is a square array of numbers.
SquareMatrix matrix_from_json(const nlohmann::json& j);

/// {generator, chains, residuals}.
nlohmann::json chain_basis_to_json(const lie::ChainBasis& cb);

/// {"name": ..., "generator": matrix, "basis": [matrix, ...]}.
lie::AlgebraCase algebra_from_json(const nlohmann::json& j);

/// Preset name, or "file:<path>" pointing at a JSON algebra description.
lie::AlgebraCase load_algebra(const std::string& spec);

}  // namespace parashear
