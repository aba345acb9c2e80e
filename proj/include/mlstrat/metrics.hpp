#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"
#include "mlstrat/folds.hpp"

namespace mlstrat {

/// A distribution measure plus what had to be special-cased to compute it.
struct DistributionScore {
  double value = 0.0;
  bool clamped = false;                   // some negative count was 0 and was replaced by 1
  std::vector<LabelSetKey> skipped;       // label sets with no global support, left out of the mean
};

struct ZeroCounts {
  std::size_t fz = 0;
  std::size_t flz = 0;
  std::size_t flpz = 0;

  bool operator==(const ZeroCounts&) const = default;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct FoldStats {
  double ld = 0.0;
  double lpd = 0.0;
  double ed = 0.0;
  std::size_t fz = 0;
  std::size_t flz = 0;
  std::size_t flpz = 0;
  double pair_miss_pct_mean = 0.0;
  double pair_miss_pct_std = 0.0;
  bool ratio_clamped = false;
  std::vector<LabelSetKey> skipped_labels;
};

namespace detail {

inline void check_assignment(const MultiLabelDataset& d, const FoldAssignment& a) {
  a.validate();
  if (a.n_samples() != d.n_samples())
    throw InvariantError("fold assignment covers " + std::to_string(a.n_samples()) +
                         " samples but the dataset has " + std::to_string(d.n_samples()));
}

/// Per-fold and global evidence counts for every key: counts[e][j], global[e].
struct EvidenceTable {
  std::vector<std::vector<std::size_t>> per_fold;
  std::vector<std::size_t> global;
  std::vector<std::size_t> fold_sizes;
};

inline EvidenceTable count_evidence(const MultiLabelDataset& d, const FoldAssignment& a,
                                    std::span<const LabelSetKey> keys) {
  EvidenceTable t;
  t.per_fold.assign(keys.size(), std::vector<std::size_t>(a.k, 0));
  t.global.assign(keys.size(), 0);
  t.fold_sizes = a.fold_sizes();
  const std::uint64_t n_labels = d.n_labels();
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t e = 0; e < keys.size(); ++e) index.emplace(keys[e].lo * n_labels + keys[e].hi, e);
  for (std::size_t s = 0; s < d.n_samples(); ++s) {
    const auto ys = d.labels_of(s);
    for (std::size_t x = 0; x < ys.size(); ++x) {
      for (std::size_t y = x; y < ys.size(); ++y) {
        if (auto it = index.find(ys[x] * n_labels + ys[y]); it != index.end()) {
          ++t.per_fold[it->second][a.fold_of[s]];
          ++t.global[it->second];
        }
      }
    }
  }
  return t;
}

inline std::vector<LabelSetKey> all_singletons(std::size_t n_labels) {
  std::vector<LabelSetKey> keys;
  for (LabelIndex i = 0; i < n_labels; ++i) keys.push_back(LabelSetKey::single(i));
  return keys;
}

inline std::vector<LabelSetKey> true_pairs(const MultiLabelDataset& d) {
  return enumerate_label_sets(d, false);
}

// Mean over keys with global support of the mean over folds of
// |pos_j / neg_j - pos / neg|, with zero negative counts replaced by 1.
inline DistributionScore ratio_deviation(const MultiLabelDataset& d, const FoldAssignment& a,
                                         std::span<const LabelSetKey> keys) {
  check_assignment(d, a);
  const auto t = count_evidence(d, a, keys);
  for (std::size_t j = 0; j < a.k; ++j)
    if (t.fold_sizes[j] == 0) throw InputError("fold " + std::to_string(j) + " is empty");

  DistributionScore score;
  auto ratio = [&](std::size_t pos, std::size_t total) {
    std::size_t neg = total - pos;
    if (neg == 0) {
      score.clamped = true;
      neg = 1;
    }
    return static_cast<double>(pos) / static_cast<double>(neg);
  };

  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t e = 0; e < keys.size(); ++e) {
    if (t.global[e] == 0) {
      score.skipped.push_back(keys[e]);
      continue;
    }
    const double target = ratio(t.global[e], d.n_samples());
    double dev = 0.0;
    for (std::size_t j = 0; j < a.k; ++j) dev += std::abs(ratio(t.per_fold[e][j], t.fold_sizes[j]) - target);
    sum += dev / static_cast<double>(a.k);
    ++used;
  }
  score.value = used == 0 ? 0.0 : sum / static_cast<double>(used);
  return score;
}

}  // namespace detail

/// Label Distribution (LD): how far each fold's positive/negative ratio per
/// label strays from the whole dataset's ratio.
inline DistributionScore label_distribution(const MultiLabelDataset& d, const FoldAssignment& a) {
  const auto keys = detail::all_singletons(d.n_labels());
  return detail::ratio_deviation(d, a, keys);
}

/// Label Pair Distribution (LPD): LD over co-occurring label pairs. Zero when
/// no pair co-occurs.
inline DistributionScore label_pair_distribution(const MultiLabelDataset& d, const FoldAssignment& a) {
  const auto keys = detail::true_pairs(d);
  return detail::ratio_deviation(d, a, keys);
}

/// Examples Distribution (ED): mean absolute gap between fold sizes and targets.
inline double examples_distribution(std::span<const std::size_t> fold_sizes,
                                    std::span<const double> targets) {
  if (fold_sizes.size() != targets.size() || fold_sizes.empty())
    throw InputError("fold sizes and targets differ in length");
  double sum = 0.0;
  for (std::size_t j = 0; j < fold_sizes.size(); ++j)
    sum += std::abs(static_cast<double>(fold_sizes[j]) - targets[j]);
  return sum / static_cast<double>(fold_sizes.size());
}

/// ED against targets n * r_j taken from the assignment's proportions.
inline double examples_distribution(const FoldAssignment& a) {
  a.validate();
  std::vector<double> targets(a.k);
  for (std::size_t j = 0; j < a.k; ++j) {
    const double r = a.proportions.empty() ? 1.0 / static_cast<double>(a.k) : a.proportions[j];
    targets[j] = static_cast<double>(a.n_samples()) * r;
  }
  const auto sizes = a.fold_sizes();
  return examples_distribution(sizes, targets);
}

/// FZ, FLZ and FLPZ. Labels never positive in the dataset are not counted as
/// missing; FLPZ only counts misses beyond the unavoidable max(0, k - |D^e|).
inline ZeroCounts zero_counts(const MultiLabelDataset& d, const FoldAssignment& a) {
  detail::check_assignment(d, a);
  ZeroCounts z;

  const auto labels = detail::all_singletons(d.n_labels());
  const auto lt = detail::count_evidence(d, a, labels);
  std::vector<bool> fold_misses(a.k, false);
  for (std::size_t e = 0; e < labels.size(); ++e) {
    if (lt.global[e] == 0) continue;
    for (std::size_t j = 0; j < a.k; ++j) {
      if (lt.per_fold[e][j] == 0) {
        ++z.flz;
        fold_misses[j] = true;
      }
    }
  }
  z.fz = static_cast<std::size_t>(std::count(fold_misses.begin(), fold_misses.end(), true));

  const auto pairs = detail::true_pairs(d);
  const auto pt = detail::count_evidence(d, a, pairs);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto missing = static_cast<std::size_t>(
        std::count(pt.per_fold[e].begin(), pt.per_fold[e].end(), std::size_t{0}));
    const std::size_t inevitable = a.k > pt.global[e] ? a.k - pt.global[e] : 0;
    if (missing > inevitable) z.flpz += missing - inevitable;
  }
  return z;
}

/// Fraction of co-occurring label pairs with no evidence in a fold: mean and
/// population standard deviation over folds. (0, 0) when no pair co-occurs.
inline MeanStd pair_miss_percentage(const MultiLabelDataset& d, const FoldAssignment& a) {
  detail::check_assignment(d, a);
  const auto pairs = detail::true_pairs(d);
  if (pairs.empty()) return {};
  const auto t = detail::count_evidence(d, a, pairs);

  std::vector<double> per_fold(a.k, 0.0);
  for (std::size_t e = 0; e < pairs.size(); ++e)
    for (std::size_t j = 0; j < a.k; ++j)
      if (t.per_fold[e][j] == 0) per_fold[j] += 1.0;
  for (auto& x : per_fold) x /= static_cast<double>(pairs.size());

  MeanStd out;
  for (double x : per_fold) out.mean += x;
  out.mean /= static_cast<double>(a.k);
  for (double x : per_fold) out.std += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(out.std / static_cast<double>(a.k));
  return out;
}

inline FoldStats compute_fold_stats(const MultiLabelDataset& d, const FoldAssignment& a) {
  FoldStats s;
  const auto ld = label_distribution(d, a);
  const auto lpd = label_pair_distribution(d, a);
  s.ld = ld.value;
  s.lpd = lpd.value;
  s.ratio_clamped = ld.clamped || lpd.clamped;
  s.skipped_labels = ld.skipped;
  s.ed = examples_distribution(a);
  const auto z = zero_counts(d, a);
  s.fz = z.fz;
  s.flz = z.flz;
  s.flpz = z.flpz;
  const auto pm = pair_miss_percentage(d, a);
  s.pair_miss_pct_mean = pm.mean;
  s.pair_miss_pct_std = pm.std;
  return s;
}

}  // namespace mlstrat
