#include <gtest/gtest.h>

#include <vector>

#include "mlstrat/metrics.hpp"
#include "mlstrat/random.hpp"
#include "mlstrat/synthetic.hpp"
#include "support/oracles.hpp"

using namespace mlstrat;

namespace {

FoldAssignment assign(std::size_t k, std::vector<std::size_t> fold_of) {
  FoldAssignment a;
  a.k = k;
  a.fold_of = std::move(fold_of);
  a.method = "manual";
  return a;
}

MultiLabelDataset pair_dataset() { return MultiLabelDataset(2, {{0, 1}, {0, 1}, {0}, {1}}); }

}  // namespace

TEST(LabelDistribution, Examples) {
  const MultiLabelDataset half(1, {{0}, {}, {0}, {}});
  EXPECT_DOUBLE_EQ(label_distribution(half, assign(2, {0, 0, 1, 1})).value, 0.0);

  const MultiLabelDataset d(1, {{0}, {0}, {0}, {0}, {}, {}});
  const auto clamped = label_distribution(d, assign(2, {0, 0, 0, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(clamped.value, 1.25);
  EXPECT_TRUE(clamped.clamped);
  const auto even = label_distribution(d, assign(2, {0, 0, 1, 1, 0, 1}));
  EXPECT_DOUBLE_EQ(even.value, 0.0);
  EXPECT_FALSE(even.clamped);
}

TEST(LabelDistribution, SkipsLabelsWithoutSupport) {
  const MultiLabelDataset d(3, {{0}, {}, {0}, {}});
  const auto score = label_distribution(d, assign(2, {0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(score.value, 0.0);
  EXPECT_EQ(score.skipped, (std::vector<LabelSetKey>{{1, 1}, {2, 2}}));
}

TEST(LabelDistribution, EmptyFoldAndSizeMismatch) {
  const MultiLabelDataset d(1, {{0}, {}});
  EXPECT_THROW(label_distribution(d, assign(3, {0, 1})), InputError);
  EXPECT_THROW(label_distribution(d, assign(2, {0, 1, 1})), InvariantError);
}

TEST(LabelPairDistribution, Examples) {
  const auto d = pair_dataset();
  EXPECT_DOUBLE_EQ(label_pair_distribution(d, assign(2, {0, 1, 1, 0})).value, 0.0);
  EXPECT_DOUBLE_EQ(label_pair_distribution(d, assign(2, {0, 0, 1, 1})).value, 1.0);
  const MultiLabelDataset flat(3, {{0}, {1}, {2}, {}});
  EXPECT_DOUBLE_EQ(label_pair_distribution(flat, assign(2, {0, 0, 1, 1})).value, 0.0);
}

TEST(ExamplesDistribution, Examples) {
  const auto ed = [](std::vector<std::size_t> sizes, std::vector<double> targets) {
    return examples_distribution(sizes, targets);
  };
  EXPECT_DOUBLE_EQ(ed({5, 5}, {5, 5}), 0.0);
  EXPECT_DOUBLE_EQ(ed({3, 1}, {2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(ed({6, 4}, {5, 5}), 1.0);
  EXPECT_THROW(ed({1, 2}, {1.5}), InputError);

  auto a = assign(2, {0, 0, 0, 1});
  EXPECT_DOUBLE_EQ(examples_distribution(a), 1.0);
  a.proportions = {0.75, 0.25};
  EXPECT_DOUBLE_EQ(examples_distribution(a), 0.0);
}

TEST(ZeroCounts, Examples) {
  const MultiLabelDataset split(1, {{0}, {}, {0}, {}});
  const auto none = zero_counts(split, assign(2, {0, 0, 1, 1}));
  EXPECT_EQ(none.fz + none.flz + none.flpz, 0u);

  const auto one_side = zero_counts(split, assign(2, {0, 1, 0, 1}));
  EXPECT_EQ(one_side.fz, 1u);
  EXPECT_EQ(one_side.flz, 1u);

  // Pair {0,1} in samples 0, 1, 2; fold 0 holds two of them, fold 1 the third.
  std::vector<std::vector<LabelIndex>> sets(20);
  sets[0] = sets[1] = sets[2] = {0, 1};
  std::vector<std::size_t> fold_of(20);
  for (std::size_t s = 0; s < 20; ++s) fold_of[s] = s / 2;
  const auto z = zero_counts(MultiLabelDataset(2, sets), assign(10, fold_of));
  EXPECT_EQ(z.flpz, 1u);
  EXPECT_EQ(z.flz, 16u);
  EXPECT_EQ(z.fz, 8u);
}

TEST(PairMiss, Examples) {
  const MultiLabelDataset everywhere(2, {{0, 1}, {0, 1}});
  const auto full = pair_miss_percentage(everywhere, assign(2, {0, 1}));
  EXPECT_DOUBLE_EQ(full.mean, 0.0);
  EXPECT_DOUBLE_EQ(full.std, 0.0);

  const MultiLabelDataset once(2, {{0, 1}, {0}});
  const auto half = pair_miss_percentage(once, assign(2, {0, 1}));
  EXPECT_DOUBLE_EQ(half.mean, 0.5);
  EXPECT_DOUBLE_EQ(half.std, 0.5);

  const MultiLabelDataset flat(2, {{0}, {1}});
  const auto empty = pair_miss_percentage(flat, assign(2, {0, 1}));
  EXPECT_DOUBLE_EQ(empty.mean, 0.0);
  EXPECT_DOUBLE_EQ(empty.std, 0.0);
}

TEST(FoldStats, MatchesNaiveRecomputation) {
  Rng rng(31337);
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 2 + rng.below(25);
    const std::size_t k = 2 + rng.below(std::min<std::size_t>(n - 1, 5));
    const auto d = random_dataset(n, 1 + rng.below(5), 0.1 + 0.5 * (rng.below(100) / 100.0), rng.next());
    std::vector<std::size_t> fold_of(n);
    for (std::size_t s = 0; s < n; ++s) fold_of[s] = s < k ? s : rng.below(k);
    rng.shuffle(std::span<std::size_t>(fold_of));
    const auto a = assign(k, fold_of);

    const auto stats = compute_fold_stats(d, a);
    EXPECT_NEAR(stats.ld, oracle::ld(d, fold_of, k), 1e-9);
    EXPECT_NEAR(stats.lpd, oracle::lpd(d, fold_of, k), 1e-9);
    EXPECT_NEAR(stats.ed, oracle::ed(fold_of, k), 1e-9);
    const auto z = oracle::zeros(d, fold_of, k);
    EXPECT_EQ(stats.fz, z.fz);
    EXPECT_EQ(stats.flz, z.flz);
    EXPECT_EQ(stats.flpz, z.flpz);
    const auto [mean, std] = oracle::pair_miss(d, fold_of, k);
    EXPECT_NEAR(stats.pair_miss_pct_mean, mean, 1e-9);
    EXPECT_NEAR(stats.pair_miss_pct_std, std, 1e-9);

    EXPECT_LE(stats.fz, k);
    EXPECT_LE(stats.flz, k * d.n_labels());
    EXPECT_GE(stats.pair_miss_pct_mean, 0.0);
    EXPECT_LE(stats.pair_miss_pct_mean, 1.0);
  }
}

TEST(FoldStats, InvariantUnderFoldRelabeling) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_dataset(30, 5, 0.3, rng.next());
    std::vector<std::size_t> fold_of(30);
    for (std::size_t s = 0; s < 30; ++s) fold_of[s] = s % 3;
    rng.shuffle(std::span<std::size_t>(fold_of));
    std::vector<std::size_t> perm{0, 1, 2};
    rng.shuffle(std::span<std::size_t>(perm));
    auto relabeled = fold_of;
    for (auto& f : relabeled) f = perm[f];
    const auto a = compute_fold_stats(d, assign(3, fold_of));
    const auto b = compute_fold_stats(d, assign(3, relabeled));
    EXPECT_NEAR(a.ld, b.ld, 1e-12);
    EXPECT_NEAR(a.lpd, b.lpd, 1e-12);
    EXPECT_EQ(a.flz, b.flz);
    EXPECT_EQ(a.flpz, b.flpz);
    EXPECT_NEAR(a.pair_miss_pct_std, b.pair_miss_pct_std, 1e-12);
  }
}
