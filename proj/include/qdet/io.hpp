#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdet/bayes.hpp"
#include "qdet/complex_matrix.hpp"
#include "qdet/errors.hpp"
#include "qdet/group_action.hpp"
#include "qdet/povm.hpp"

namespace qdet::io {

using nlohmann::json;

namespace detail {

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

inline ComplexMatrix parse_matrix(const json& rows, std::size_t dim, const std::string& where) {
  if (!rows.is_array() || rows.size() != dim)
    throw ValidationError(where + ": expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != dim)
      throw ValidationError(where + ", row " + std::to_string(r + 1) + ": expected " +
                            std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      const json& entry = row[c];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number())
        throw ValidationError(where + ", row " + std::to_string(r + 1) + ", column " +
                              std::to_string(c + 1) + ": expected a [re, im] pair");
      m(r, c) = Complex{entry[0].get<double>(), entry[1].get<double>()};
    }
  }
  return m;
}

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::size_t read_dim(const json& j, const std::string& path) {
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    throw ValidationError(path + ": missing or invalid 'dim'");
  return static_cast<std::size_t>(j["dim"].get<int>());
}

}  // namespace detail

/// Detector file: {"dim": d, "elements": [matrix, ...]} with each matrix an
/// array of d rows of d [re, im] pairs.
inline Povm read_povm(const std::string& path) {
  const json j = detail::load_json(path);
  const std::size_t dim = detail::read_dim(j, path);
  if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty())
    throw ValidationError(path + ": missing or empty 'elements'");
  std::vector<HermitianOperator> elements;
  for (std::size_t k = 0; k < j["elements"].size(); ++k) {
    const std::string where = path + ": elements[" + std::to_string(k + 1) + "]";
    try {
      elements.emplace_back(detail::parse_matrix(j["elements"][k], dim, where));
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return validate_povm(std::move(elements));
}

inline void write_povm(const Povm& povm, const std::string& path) {
  json j;
  j["dim"] = povm.dim;
  j["elements"] = json::array();
  for (const auto& e : povm.elements) j["elements"].push_back(detail::matrix_to_json(e.matrix()));
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

/// Ensemble file: {"dim": d, "states": [matrix, ...], "priors": [p, ...]}.
inline Ensemble read_ensemble(const std::string& path) {
  const json j = detail::load_json(path);
  const std::size_t dim = detail::read_dim(j, path);
  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty())
    throw ValidationError(path + ": missing or empty 'states'");
  if (!j.contains("priors") || !j["priors"].is_array())
    throw ValidationError(path + ": missing 'priors'");
  std::vector<HermitianOperator> states;
  for (std::size_t k = 0; k < j["states"].size(); ++k)
    states.emplace_back(detail::parse_matrix(j["states"][k], dim,
                                             path + ": states[" + std::to_string(k + 1) + "]"));
  std::vector<double> priors;
  for (const auto& p : j["priors"]) {
    if (!p.is_number()) throw ValidationError(path + ": priors must be numbers");
    priors.push_back(p.get<double>());
  }
  return validate_ensemble(std::move(states), std::move(priors));
}

/// Cost file: {"cost": [[c11, ...], ...]} with N rows of N' decimals.
inline CostMatrix read_cost(const std::string& path) {
  const json j = detail::load_json(path);
  if (!j.contains("cost") || !j["cost"].is_array() || j["cost"].empty())
    throw ValidationError(path + ": missing or empty 'cost'");
  const std::size_t rows = j["cost"].size();
  const json& first = j["cost"][0];
  if (!first.is_array() || first.empty())
    throw ValidationError(path + ": cost rows must be nonempty arrays");
  const std::size_t cols = first.size();
  std::vector<double> values;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j["cost"][r];
    if (!row.is_array() || row.size() != cols)
      throw ValidationError(path + ": cost row " + std::to_string(r + 1) +
                            " has inconsistent length");
    for (const auto& v : row) {
      if (!v.is_number())
        throw ValidationError(path + ": cost row " + std::to_string(r + 1) +
                              " holds a non-numeric entry");
      values.push_back(v.get<double>());
    }
  }
  return CostMatrix(rows, cols, std::move(values));
}

/// Group file: {"dim": d, "unitaries": [...], "conjugate": [...],
/// "permutation": [[...]], "identity": k}, permutations 0-based.
inline GroupAction read_group_action(const std::string& path) {
  const json j = detail::load_json(path);
  const std::size_t dim = detail::read_dim(j, path);
  for (const char* field : {"unitaries", "conjugate", "permutation"})
    if (!j.contains(field) || !j[field].is_array())
      throw ValidationError(path + ": missing '" + std::string(field) + "'");
  const std::size_t order = j["unitaries"].size();
  if (order == 0 || j["conjugate"].size() != order || j["permutation"].size() != order)
    throw ValidationError(path + ": unitaries, conjugate and permutation must have equal length");
  GroupAction action;
  for (std::size_t g = 0; g < order; ++g) {
    GroupElement element;
    element.unitary = detail::parse_matrix(j["unitaries"][g], dim,
                                           path + ": unitaries[" + std::to_string(g + 1) + "]");
    element.antiunitary = j["conjugate"][g].get<bool>();
    for (const auto& idx : j["permutation"][g]) {
      if (!idx.is_number_integer())
        throw ValidationError(path + ": permutation entries must be integers");
      element.permutation.push_back(idx.get<int>());
    }
    action.elements.push_back(std::move(element));
  }
  action.identity_index = j.value("identity", 0);
  return action;
}

inline void write_group_action(const GroupAction& action, std::size_t dim,
                               const std::string& path) {
  json j;
  j["dim"] = dim;
  j["unitaries"] = json::array();
  j["conjugate"] = json::array();
  j["permutation"] = json::array();
  for (const auto& g : action.elements) {
    j["unitaries"].push_back(detail::matrix_to_json(g.unitary));
    j["conjugate"].push_back(g.antiunitary);
    j["permutation"].push_back(g.permutation);
  }
  j["identity"] = action.identity_index;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qdet::io
