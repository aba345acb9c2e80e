#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mlstrat/error.hpp"

namespace mlstrat {

/// A k-way partition of sample indices, with the settings that produced it.
struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // fold index per sample
  std::string method;
  std::uint64_t seed = 0;
  std::vector<double> proportions;

  std::size_t n_samples() const noexcept { return fold_of.size(); }

  /// Sample indices per fold, ascending.
  std::vector<std::vector<std::size_t>> folds() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < fold_of.size(); ++i) out.at(fold_of[i]).push_back(i);
    return out;
  }

  std::vector<std::size_t> fold_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto f : fold_of) ++sizes.at(f);
    return sizes;
  }

  void validate() const {
    if (k == 0) throw InvariantError("fold assignment has k = 0");
    if (!proportions.empty() && proportions.size() != k)
      throw InvariantError("fold assignment has " + std::to_string(proportions.size()) +
                           " proportions for k = " + std::to_string(k));
    for (std::size_t i = 0; i < fold_of.size(); ++i)
      if (fold_of[i] >= k)
        throw InvariantError("sample " + std::to_string(i) + " assigned to fold " +
                             std::to_string(fold_of[i]) + " of " + std::to_string(k));
  }

  bool operator==(const FoldAssignment&) const = default;
};

}  // namespace mlstrat
