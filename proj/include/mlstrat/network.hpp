#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"
#include "mlstrat/folds.hpp"
#include "mlstrat/graph.hpp"

namespace mlstrat {

/// Stability of community structure across the train/test sides of k folds.
struct NetworkReport {
  std::size_t k = 0;
  double train_q_mean = 0.0;
  double train_q_std = 0.0;
  double train_count_std = 0.0;  // std of community counts over train graphs
  double test_count_std = 0.0;
  double train_size_std = 0.0;   // std of mean community size over train graphs
  double test_size_std = 0.0;
  std::size_t unique_communities = 0;  // distinct vertex sets, train and test, all folds
  std::size_t unique_partitions = 0;   // distinct partitions, train and test, all folds
  std::size_t matched_partitions = 0;  // folds where train and test partitions coincide
  double q_diff_mean = 0.0;            // |Q_train - Q_test|
  double q_diff_std = 0.0;
  std::vector<CommunityDetection> train;
  std::vector<CommunityDetection> test;
};

namespace detail {

inline void mean_std(std::span<const double> xs, double& mean, double& std) {
  mean = 0.0;
  std = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  for (double x : xs) std += (x - mean) * (x - mean);
  std = std::sqrt(std / static_cast<double>(xs.size()));
}

}  // namespace detail

/// Summarizes per-fold community detections on the train and test sides.
inline NetworkReport summarize_network(std::vector<CommunityDetection> train,
                                       std::vector<CommunityDetection> test) {
  if (train.size() != test.size())
    throw InputError("got " + std::to_string(train.size()) + " train results but " +
                     std::to_string(test.size()) + " test results");
  NetworkReport r;
  r.k = train.size();
  r.train = std::move(train);
  r.test = std::move(test);

  std::vector<double> q_train, q_diff, count_train, count_test, size_train, size_test;
  std::set<std::vector<LabelIndex>> communities;
  std::set<std::vector<std::vector<LabelIndex>>> partitions;
  auto mean_size = [](const CommunityDetection& c, std::size_t groups) {
    return static_cast<double>(c.partition.community_of.size()) /
           static_cast<double>(std::max<std::size_t>(groups, 1));
  };
  for (std::size_t j = 0; j < r.k; ++j) {
    const auto& tr = r.train[j];
    const auto& te = r.test[j];
    q_train.push_back(tr.modularity);
    q_diff.push_back(std::abs(tr.modularity - te.modularity));

    const auto tr_groups = tr.partition.communities();
    const auto te_groups = te.partition.communities();
    count_train.push_back(static_cast<double>(tr_groups.size()));
    count_test.push_back(static_cast<double>(te_groups.size()));
    size_train.push_back(mean_size(tr, tr_groups.size()));
    size_test.push_back(mean_size(te, te_groups.size()));

    communities.insert(tr_groups.begin(), tr_groups.end());
    communities.insert(te_groups.begin(), te_groups.end());
    partitions.insert(tr_groups);
    partitions.insert(te_groups);
    if (tr_groups == te_groups) ++r.matched_partitions;
  }
  r.unique_communities = communities.size();
  r.unique_partitions = partitions.size();

  double unused = 0.0;
  detail::mean_std(q_train, r.train_q_mean, r.train_q_std);
  detail::mean_std(q_diff, r.q_diff_mean, r.q_diff_std);
  detail::mean_std(count_train, unused, r.train_count_std);
  detail::mean_std(count_test, unused, r.test_count_std);
  detail::mean_std(size_train, unused, r.train_size_std);
  detail::mean_std(size_test, unused, r.test_size_std);
  return r;
}

/// Runs community detection on every train and test graph and summarizes how
/// stable the result is. Graphs without edges yield all-singleton partitions
/// with Q = 0.
inline NetworkReport network_characteristics(std::span<const CoOccurrenceGraph> train,
                                             std::span<const CoOccurrenceGraph> test) {
  if (train.size() != test.size())
    throw InputError("got " + std::to_string(train.size()) + " train graphs but " +
                     std::to_string(test.size()) + " test graphs");
  std::vector<CommunityDetection> tr, te;
  for (const auto& g : train) tr.push_back(detect_communities(g));
  for (const auto& g : test) te.push_back(detect_communities(g));
  return summarize_network(std::move(tr), std::move(te));
}

/// Train graph = samples outside fold j, test graph = samples in fold j.
inline void fold_graphs(const MultiLabelDataset& d, const FoldAssignment& a, bool weighted,
                        std::vector<CoOccurrenceGraph>& train, std::vector<CoOccurrenceGraph>& test) {
  a.validate();
  if (a.n_samples() != d.n_samples())
    throw InvariantError("fold assignment does not match the dataset's sample count");
  train.clear();
  test.clear();
  const auto folds = a.folds();
  for (std::size_t j = 0; j < a.k; ++j) {
    std::vector<std::size_t> rest;
    for (std::size_t s = 0; s < d.n_samples(); ++s)
      if (a.fold_of[s] != j) rest.push_back(s);
    train.push_back(build_graph(d, weighted, rest));
    test.push_back(build_graph(d, weighted, folds[j]));
  }
}

inline NetworkReport network_for_folds(const MultiLabelDataset& d, const FoldAssignment& a,
                                       bool weighted) {
  std::vector<CoOccurrenceGraph> train, test;
  fold_graphs(d, a, weighted, train, test);
  return network_characteristics(train, test);
}

}  // namespace mlstrat
