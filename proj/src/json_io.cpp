#include "parashear/json_io.hpp"

#include "parashear/error.hpp"

#include <fstream>

namespace parashear {

using nlohmann::json;

json matrix_to_json(const SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SquareMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() < 2) throw ConfigError("matrix: expected an array of at least 2 rows");
  const std::size_t n = j.size();
  std::vector<double> values;
  values.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw ConfigError("matrix: rows must have length " + std::to_string(n));
    for (const auto& v : row) {
      if (!v.is_number()) throw ConfigError("matrix: entries must be numbers");
      values.push_back(v.get<double>());
    }
  }
  return SquareMatrix::from_row_major(n, values);
}

json chain_basis_to_json(const lie::ChainBasis& cb) {
  json chains = json::array();
  for (const auto& chain : cb.chains) {
    json c = json::array();
    for (const auto& m : chain) c.push_back(matrix_to_json(m));
    chains.push_back(std::move(c));
  }
  return {{"generator", matrix_to_json(cb.generator)},
          {"chains", chains},
          {"lengths", cb.lengths()},
          {"residuals",
           {{"bracket", cb.bracket_residual},
            {"centralizer", cb.centralizer_residual},
            {"min_singular_value", cb.min_singular_value}}}};
}

lie::AlgebraCase algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("generator") || !j.contains("basis"))
    throw ConfigError("algebra file: needs \"generator\" and \"basis\"");
  if (!j.at("basis").is_array() || j.at("basis").empty())
    throw ConfigError("algebra file: basis must be a nonempty array");
  std::vector<SquareMatrix> basis;
  for (const auto& b : j.at("basis")) basis.push_back(matrix_from_json(b));
  return {j.value("name", std::string("file")), matrix_from_json(j.at("generator")), std::move(basis)};
}

lie::AlgebraCase load_algebra(const std::string& spec) {
  if (spec.rfind("file:", 0) != 0) return lie::preset_algebra(spec);
  const std::string path = spec.substr(5);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open algebra file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("algebra file " + path + ": " + e.what());
  }
  return algebra_from_json(j);
}

}  // namespace parashear
