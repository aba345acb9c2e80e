#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlstrat/error.hpp"

namespace mlstrat {

using LabelIndex = std::uint32_t;

/// Binary label assignments of n samples over a fixed label space.
///
/// Each sample's label set is stored sorted and duplicate-free. Features are
/// not modelled; readers validate and drop them.
class MultiLabelDataset {
 public:
  MultiLabelDataset() = default;

  MultiLabelDataset(std::size_t n_labels, std::vector<std::vector<LabelIndex>> labels_of,
                    std::vector<std::string> sample_ids = {})
      : n_labels_(n_labels), labels_of_(std::move(labels_of)), sample_ids_(std::move(sample_ids)) {
    if (!sample_ids_.empty() && sample_ids_.size() != labels_of_.size())
      throw InputError("sample id count " + std::to_string(sample_ids_.size()) +
                       " does not match sample count " + std::to_string(labels_of_.size()));
    for (std::size_t i = 0; i < labels_of_.size(); ++i) {
      auto& ys = labels_of_[i];
      std::sort(ys.begin(), ys.end());
      if (std::adjacent_find(ys.begin(), ys.end()) != ys.end())
        throw InputError("sample " + std::to_string(i) + " lists a label twice");
      if (!ys.empty() && ys.back() >= n_labels_)
        throw InputError("sample " + std::to_string(i) + " has label " + std::to_string(ys.back()) +
                         " outside [0, " + std::to_string(n_labels_) + ")");
    }
  }

  std::size_t n_samples() const noexcept { return labels_of_.size(); }
  std::size_t n_labels() const noexcept { return n_labels_; }

  std::span<const LabelIndex> labels_of(std::size_t sample) const { return labels_of_.at(sample); }
  const std::vector<std::vector<LabelIndex>>& label_sets() const noexcept { return labels_of_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }

  bool has_label(std::size_t sample, LabelIndex label) const {
    const auto& ys = labels_of_.at(sample);
    return std::binary_search(ys.begin(), ys.end(), label);
  }

  bool operator==(const MultiLabelDataset&) const = default;

 private:
  std::size_t n_labels_ = 0;
  std::vector<std::vector<LabelIndex>> labels_of_;
  std::vector<std::string> sample_ids_;
};

/// A label pair {lo, hi} with lo < hi, or a single label encoded as {i, i}.
struct LabelSetKey {
  LabelIndex lo = 0;
  LabelIndex hi = 0;

  static constexpr LabelSetKey pair(LabelIndex a, LabelIndex b) noexcept {
    return a <= b ? LabelSetKey{a, b} : LabelSetKey{b, a};
  }
  static constexpr LabelSetKey single(LabelIndex a) noexcept { return {a, a}; }

  constexpr bool is_singleton() const noexcept { return lo == hi; }

  /// True when every label of the key is in the sorted label set.
  bool contained_in(std::span<const LabelIndex> sorted_labels) const {
    return std::binary_search(sorted_labels.begin(), sorted_labels.end(), lo) &&
           (is_singleton() || std::binary_search(sorted_labels.begin(), sorted_labels.end(), hi));
  }

  /// True when at least one label of the key is in the sorted label set.
  bool intersects(std::span<const LabelIndex> sorted_labels) const {
    return std::binary_search(sorted_labels.begin(), sorted_labels.end(), lo) ||
           std::binary_search(sorted_labels.begin(), sorted_labels.end(), hi);
  }

  friend constexpr auto operator<=>(const LabelSetKey&, const LabelSetKey&) = default;
};

/// How a sample evidences a label pair.
enum class SupportMode {
  kAllLabels,  ///< sample holds both labels of the pair
  kAnyLabel,   ///< sample holds at least one label of the pair
};

inline bool evidences(const LabelSetKey& key, std::span<const LabelIndex> sorted_labels,
                      SupportMode mode = SupportMode::kAllLabels) {
  return mode == SupportMode::kAllLabels ? key.contained_in(sorted_labels)
                                         : key.intersects(sorted_labels);
}

/// Every co-occurring label pair (and optionally every positive label as a
/// singleton key), sorted by (lo, hi) without duplicates.
inline std::vector<LabelSetKey> enumerate_label_sets(const MultiLabelDataset& d,
                                                     bool include_singletons) {
  std::vector<LabelSetKey> keys;
  for (const auto& ys : d.label_sets()) {
    for (std::size_t a = 0; a < ys.size(); ++a) {
      if (include_singletons) keys.push_back(LabelSetKey::single(ys[a]));
      for (std::size_t b = a + 1; b < ys.size(); ++b) keys.push_back(LabelSetKey{ys[a], ys[b]});
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

/// Indices (ascending) of the samples that evidence `key`.
inline std::vector<std::size_t> support_of(const MultiLabelDataset& d, const LabelSetKey& key,
                                           SupportMode mode = SupportMode::kAllLabels) {
  if (key.lo > key.hi) throw InputError("label set key is not canonical");
  if (key.hi >= d.n_labels())
    throw InputError("label " + std::to_string(key.hi) + " outside [0, " +
                     std::to_string(d.n_labels()) + ")");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.n_samples(); ++i)
    if (evidences(key, d.labels_of(i), mode)) out.push_back(i);
  return out;
}

}  // namespace mlstrat
