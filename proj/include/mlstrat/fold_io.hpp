#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlstrat/error.hpp"
#include "mlstrat/folds.hpp"

namespace mlstrat {

// Fold file: one JSON object, keys in this order, folds in fold-index order
// with ascending sample indices, followed by a newline.
//
//   {"method":"sois","seed":7,"k":2,"proportions":[0.5,0.5],"folds":[[0,3],[1,2]]}

inline nlohmann::ordered_json folds_to_json(const FoldAssignment& a) {
  a.validate();
  nlohmann::ordered_json j;
  j["method"] = a.method;
  j["seed"] = a.seed;
  j["k"] = a.k;
  j["proportions"] = a.proportions;
  j["folds"] = a.folds();
  return j;
}

inline void write_folds(const FoldAssignment& a, std::ostream& out) {
  out << folds_to_json(a).dump() << '\n';
}

inline std::string folds_to_string(const FoldAssignment& a) {
  std::ostringstream out;
  write_folds(a, out);
  return out.str();
}

inline FoldAssignment folds_from_json(const nlohmann::json& j) {
  FoldAssignment a;
  std::vector<std::vector<std::size_t>> folds;
  try {
    if (!j.is_object()) throw InputError("fold file must hold a JSON object");
    a.method = j.at("method").get<std::string>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.k = j.at("k").get<std::size_t>();
    a.proportions = j.at("proportions").get<std::vector<double>>();
    folds = j.at("folds").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed fold file: ") + e.what());
  }
  if (folds.size() != a.k)
    throw InputError("fold file declares k = " + std::to_string(a.k) + " but lists " +
                     std::to_string(folds.size()) + " folds");

  std::size_t n = 0;
  for (const auto& f : folds)
    for (auto s : f) n = std::max(n, s + 1);
  a.fold_of.assign(n, SIZE_MAX);
  for (std::size_t j2 = 0; j2 < folds.size(); ++j2) {
    for (auto s : folds[j2]) {
      if (a.fold_of[s] != SIZE_MAX)
        throw InvariantError("sample " + std::to_string(s) + " appears in folds " +
                             std::to_string(a.fold_of[s]) + " and " + std::to_string(j2));
      a.fold_of[s] = j2;
    }
  }
  for (std::size_t s = 0; s < n; ++s)
    if (a.fold_of[s] == SIZE_MAX) throw InvariantError("sample " + std::to_string(s) + " is in no fold");
  a.validate();
  return a;
}

inline FoldAssignment read_folds(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed fold file: ") + e.what());
  }
  return folds_from_json(j);
}

inline FoldAssignment folds_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_folds(in);
}

}  // namespace mlstrat
