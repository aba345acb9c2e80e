#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"
#include "mlstrat/folds.hpp"
#include "mlstrat/ledger.hpp"
#include "mlstrat/random.hpp"

namespace mlstrat {

enum class Method { kKFold, kLabelset, kIterative, kSecondOrder };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kKFold: return "kfold";
    case Method::kLabelset: return "labelset";
    case Method::kIterative: return "is";
    case Method::kSecondOrder: return "sois";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  for (auto m : {Method::kKFold, Method::kLabelset, Method::kIterative, Method::kSecondOrder})
    if (method_name(m) == name) return m;
  throw InputError("unknown method '" + std::string(name) + "' (expected kfold, labelset, is or sois)");
}

/// Which per-label-set desirabilities shrink when a sample is placed.
enum class CounterUpdate {
  kAllEvidencedKeys,  ///< every key the sample evidences
  kSelectedKeyOnly,   ///< only the key currently being distributed
};

struct StratifierConfig {
  std::size_t k = 10;
  std::vector<double> proportions;  // empty means uniform
  std::uint64_t seed = 0;
  Method method = Method::kSecondOrder;
  bool shuffle = false;  // kfold only
  CounterUpdate counter_update = CounterUpdate::kAllEvidencedKeys;
  SupportMode support = SupportMode::kAllLabels;

  std::vector<double> resolved_proportions() const {
    auto r = proportions.empty() ? uniform_proportions(k) : proportions;
    check_proportions(k, r);
    return r;
  }
};

/// One outer iteration of distribute_over_folds, recorded for inspection.
struct DistributionStep {
  LabelSetKey key;
  std::size_t available = 0;
  std::vector<std::size_t> available_per_key;  // snapshot before distributing `key`
};

struct DistributionTrace {
  std::vector<DistributionStep> steps;
};

namespace detail {

inline void check_fold_count(const MultiLabelDataset& d, std::size_t k) {
  if (k < 2) throw InputError("need at least 2 folds, got " + std::to_string(k));
  if (k > d.n_samples())
    throw InputError("cannot split " + std::to_string(d.n_samples()) + " samples into " +
                     std::to_string(k) + " folds");
}

/// Indices attaining the maximum of `values` over `candidates`. Exact comparison.
inline std::vector<std::size_t> argmax_over(std::span<const double> values,
                                            std::span<const std::size_t> candidates) {
  std::vector<std::size_t> best;
  double top = 0.0;
  for (auto j : candidates) {
    if (best.empty() || values[j] > top) {
      best.assign(1, j);
      top = values[j];
    } else if (values[j] == top) {
      best.push_back(j);
    }
  }
  return best;
}

inline std::size_t pick_fold(std::span<const double> per_fold, std::span<const double> per_key,
                             Rng& rng) {
  std::vector<std::size_t> all(per_fold.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto best = per_key.empty() ? all : argmax_over(per_key, all);
  if (best.size() > 1) best = argmax_over(per_fold, best);
  if (best.size() > 1) return best[rng.below(best.size())];
  return best.front();
}

inline FoldAssignment stamp(FoldAssignment a, const StratifierConfig& cfg, std::vector<double> r) {
  a.method = std::string(method_name(cfg.method));
  a.seed = cfg.seed;
  a.proportions = std::move(r);
  return a;
}

}  // namespace detail

/// Greedy iterative distribution of samples into folds.
///
/// Repeatedly picks the label set with the fewest still-unassigned evidencing
/// samples (ties: smaller key) and places each of those samples, in index
/// order, into the fold that most wants that label set; ties go to the fold
/// that wants the most samples, then to a seeded random choice. Samples that
/// evidence no key (label-free samples) are placed last by sample desirability.
inline FoldAssignment distribute_over_folds(const MultiLabelDataset& d,
                                            std::span<const LabelSetKey> keys,
                                            DesirabilityLedger ledger, Rng& rng,
                                            CounterUpdate update = CounterUpdate::kAllEvidencedKeys,
                                            SupportMode mode = SupportMode::kAllLabels,
                                            DistributionTrace* trace = nullptr) {
  const std::size_t k = ledger.k();
  if (k == 0) throw InputError("ledger has no folds");
  if (!std::equal(keys.begin(), keys.end(), ledger.keys.begin(), ledger.keys.end()) ||
      ledger.per_key.size() != keys.size())
    throw InputError("ledger was built over a different key list");
  for (const auto& row : ledger.per_key)
    if (row.size() != k) throw InputError("ledger rows disagree on the fold count");

  const std::size_t n = d.n_samples();
  const std::uint64_t n_labels = d.n_labels();
  for (const auto& key : keys)
    if (key.lo > key.hi || key.hi >= n_labels) throw InputError("label set key out of range");

  // Keys evidenced by each sample, and samples evidencing each key.
  std::vector<std::vector<std::size_t>> keys_of(n);
  std::vector<std::vector<std::size_t>> support(keys.size());
  if (mode == SupportMode::kAllLabels) {
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t e = 0; e < keys.size(); ++e) index.emplace(keys[e].lo * n_labels + keys[e].hi, e);
    for (std::size_t s = 0; s < n; ++s) {
      const auto ys = d.labels_of(s);
      for (std::size_t a = 0; a < ys.size(); ++a)
        for (std::size_t b = a; b < ys.size(); ++b)
          if (auto it = index.find(ys[a] * n_labels + ys[b]); it != index.end())
            keys_of[s].push_back(it->second);
      std::sort(keys_of[s].begin(), keys_of[s].end());
    }
  } else {
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t e = 0; e < keys.size(); ++e)
        if (evidences(keys[e], d.labels_of(s), mode)) keys_of[s].push_back(e);
  }
  for (std::size_t s = 0; s < n; ++s)
    for (auto e : keys_of[s]) support[e].push_back(s);

  std::vector<std::size_t> available(keys.size());
  for (std::size_t e = 0; e < keys.size(); ++e) available[e] = support[e].size();

  FoldAssignment out;
  out.k = k;
  out.fold_of.assign(n, 0);
  std::vector<bool> placed(n, false);

  auto place = [&](std::size_t s, std::size_t fold, std::size_t selected) {
    out.fold_of[s] = fold;
    placed[s] = true;
    ledger.per_fold[fold] -= 1.0;
    for (auto e : keys_of[s]) {
      --available[e];
      if (update == CounterUpdate::kAllEvidencedKeys) ledger.per_key[e][fold] -= 1.0;
    }
    if (update == CounterUpdate::kSelectedKeyOnly) ledger.per_key[selected][fold] -= 1.0;
  };

  for (;;) {
    std::size_t chosen = keys.size();
    for (std::size_t e = 0; e < keys.size(); ++e) {
      if (available[e] == 0) continue;
      if (chosen == keys.size() || available[e] < available[chosen] ||
          (available[e] == available[chosen] && keys[e] < keys[chosen]))
        chosen = e;
    }
    if (chosen == keys.size()) break;
    if (trace) trace->steps.push_back({keys[chosen], available[chosen], available});

    for (auto s : support[chosen]) {
      if (placed[s]) continue;
      place(s, detail::pick_fold(ledger.per_fold, ledger.per_key[chosen], rng), chosen);
    }
  }

  for (std::size_t s = 0; s < n; ++s) {
    if (placed[s]) continue;
    const auto fold = detail::pick_fold(ledger.per_fold, {}, rng);
    out.fold_of[s] = fold;
    placed[s] = true;
    ledger.per_fold[fold] -= 1.0;
  }
  return out;
}

/// Contiguous windows over the (optionally shuffled) sample order. Window
/// sizes are floor(n * r_j); leftover samples go one each to the earliest folds.
inline FoldAssignment split_kfold(const MultiLabelDataset& d, const StratifierConfig& cfg) {
  auto r = cfg.resolved_proportions();
  detail::check_fold_count(d, cfg.k);
  const std::size_t n = d.n_samples();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.shuffle) {
    Rng rng(cfg.seed);
    rng.shuffle(std::span<std::size_t>(order));
  }

  std::vector<std::size_t> sizes(cfg.k);
  std::size_t used = 0;
  for (std::size_t j = 0; j < cfg.k; ++j) {
    sizes[j] = static_cast<std::size_t>(std::floor(static_cast<double>(n) * r[j] + 1e-9));
    used += sizes[j];
  }
  for (std::size_t j = 0; used < n; j = (j + 1) % cfg.k, ++used) ++sizes[j];

  FoldAssignment a;
  a.k = cfg.k;
  a.fold_of.assign(n, 0);
  std::size_t pos = 0;
  for (std::size_t j = 0; j < cfg.k; ++j)
    for (std::size_t c = 0; c < sizes[j] && pos < n; ++c) a.fold_of[order[pos++]] = j;
  return detail::stamp(std::move(a), cfg, std::move(r));
}

/// Stratification over label-powerset classes (distinct full label sets).
/// Classes go in descending frequency, ties by lexicographic label set; each
/// sample goes to the fold that currently wants the most samples.
inline FoldAssignment split_labelset(const MultiLabelDataset& d, const StratifierConfig& cfg) {
  auto r = cfg.resolved_proportions();
  detail::check_fold_count(d, cfg.k);

  std::map<std::vector<LabelIndex>, std::vector<std::size_t>> classes;
  for (std::size_t s = 0; s < d.n_samples(); ++s) classes[d.label_sets()[s]].push_back(s);

  std::vector<const std::pair<const std::vector<LabelIndex>, std::vector<std::size_t>>*> order;
  for (const auto& entry : classes) order.push_back(&entry);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* x, auto* y) { return x->second.size() > y->second.size(); });

  Rng rng(cfg.seed);
  std::vector<double> want(cfg.k);
  for (std::size_t j = 0; j < cfg.k; ++j) want[j] = static_cast<double>(d.n_samples()) * r[j];

  FoldAssignment a;
  a.k = cfg.k;
  a.fold_of.assign(d.n_samples(), 0);
  for (auto* cls : order) {
    for (auto s : cls->second) {
      const auto fold = detail::pick_fold(want, {}, rng);
      a.fold_of[s] = fold;
      want[fold] -= 1.0;
    }
  }
  return detail::stamp(std::move(a), cfg, std::move(r));
}

/// First-order iterative stratification: one singleton key per positive label.
inline FoldAssignment split_is(const MultiLabelDataset& d, const StratifierConfig& cfg,
                               DistributionTrace* trace = nullptr) {
  auto r = cfg.resolved_proportions();
  detail::check_fold_count(d, cfg.k);
  std::vector<LabelSetKey> keys;
  for (const auto& key : enumerate_label_sets(d, true))
    if (key.is_singleton()) keys.push_back(key);
  Rng rng(cfg.seed);
  auto ledger = build_ledger(d, keys, cfg.k, r, cfg.support);
  auto a = distribute_over_folds(d, keys, std::move(ledger), rng, cfg.counter_update, cfg.support,
                                 trace);
  return detail::stamp(std::move(a), cfg, std::move(r));
}

/// Second-order iterative stratification: co-occurring label pairs and single
/// labels are distributed together, scarcest first. Once pair evidence runs
/// out the singleton keys finish the job exactly as first-order IS would.
inline FoldAssignment split_sois(const MultiLabelDataset& d, const StratifierConfig& cfg,
                                 DistributionTrace* trace = nullptr) {
  auto r = cfg.resolved_proportions();
  detail::check_fold_count(d, cfg.k);
  const auto keys = enumerate_label_sets(d, true);
  Rng rng(cfg.seed);
  auto ledger = build_ledger(d, keys, cfg.k, r, cfg.support);
  auto a = distribute_over_folds(d, keys, std::move(ledger), rng, cfg.counter_update, cfg.support,
                                 trace);
  return detail::stamp(std::move(a), cfg, std::move(r));
}

inline FoldAssignment stratify(const MultiLabelDataset& d, const StratifierConfig& cfg) {
  switch (cfg.method) {
    case Method::kKFold: return split_kfold(d, cfg);
    case Method::kLabelset: return split_labelset(d, cfg);
    case Method::kIterative: return split_is(d, cfg);
    case Method::kSecondOrder: return split_sois(d, cfg);
  }
  throw InputError("unknown method");
}

}  // namespace mlstrat
