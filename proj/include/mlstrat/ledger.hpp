#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"

namespace mlstrat {

inline std::vector<double> uniform_proportions(std::size_t k) {
  if (k == 0) throw InputError("fold count must be positive");
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

/// Throws InputError unless k >= 2 and r is a length-k probability vector.
inline void check_proportions(std::size_t k, std::span<const double> r) {
  if (k < 2) throw InputError("need at least 2 folds, got " + std::to_string(k));
  if (r.size() != k)
    throw InputError("expected " + std::to_string(k) + " proportions, got " +
                     std::to_string(r.size()));
  for (double x : r)
    if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("proportions must be finite and >= 0");
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9)
    throw InputError("proportions sum to " + std::to_string(total) + ", not 1");
}

/// Remaining number of samples each fold wants, overall and per label set.
struct DesirabilityLedger {
  std::vector<double> per_fold;
  std::vector<LabelSetKey> keys;
  std::vector<std::vector<double>> per_key;  // parallel to keys, each of length k

  std::size_t k() const noexcept { return per_fold.size(); }

  std::size_t index_of(const LabelSetKey& key) const {
    const auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) throw InputError("label set key not present in ledger");
    return static_cast<std::size_t>(it - keys.begin());
  }

  std::span<const double> for_key(const LabelSetKey& key) const { return per_key[index_of(key)]; }
};

inline DesirabilityLedger build_ledger(const MultiLabelDataset& d, std::span<const LabelSetKey> keys,
                                       std::size_t k, std::span<const double> r,
                                       SupportMode mode = SupportMode::kAllLabels) {
  check_proportions(k, r);
  DesirabilityLedger ledger;
  ledger.keys.assign(keys.begin(), keys.end());
  const auto n = static_cast<double>(d.n_samples());
  for (std::size_t j = 0; j < k; ++j) ledger.per_fold.push_back(n * r[j]);

  for (const auto& key : keys) {
    const auto support = static_cast<double>(support_of(d, key, mode).size());
    auto& row = ledger.per_key.emplace_back(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = support * r[j];
  }
  return ledger;
}

}  // namespace mlstrat
