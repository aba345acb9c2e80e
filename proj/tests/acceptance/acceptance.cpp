// Acceptance suite: prints one PASS / FAIL / SKIP line per criterion and
// exits nonzero if any criterion fails.
//
// Criterion 1 reads the public emotions, scene and yeast ARFF files from the
// directory named by MLSTRAT_DATA_DIR (or argv[1]) and is skipped when they
// are not there.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mlstrat/mlstrat.hpp"
#include "support/oracles.hpp"

using namespace mlstrat;
namespace fs = std::filesystem;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

StratifierConfig config(Method m, std::size_t k, std::uint64_t seed) {
  StratifierConfig c;
  c.method = m;
  c.k = k;
  c.seed = seed;
  return c;
}

std::vector<std::vector<std::size_t>> fold_multiset(const FoldAssignment& a) {
  auto folds = a.folds();
  std::sort(folds.begin(), folds.end());
  return folds;
}

// 1 ---------------------------------------------------------------------------

struct Reference {
  const char* name;
  std::size_t labels;
  double pair_miss;
};

Verdict desk_reproduction(const fs::path& dir) {
  const Reference refs[] = {{"yeast", 14, 0.062}, {"emotions", 6, 0.161}, {"scene", 6, 0.276}};
  std::vector<const Reference*> present;
  for (const auto& r : refs)
    if (!dir.empty() && fs::exists(dir / (std::string(r.name) + ".arff"))) present.push_back(&r);
  if (present.size() != std::size(refs))
    return {Outcome::kSkip, "emotions/scene/yeast ARFF files not found (set MLSTRAT_DATA_DIR)"};

  bool ok = true;
  std::string detail;
  for (const auto* r : present) {
    const auto t0 = Clock::now();
    const auto d = load_dataset(dir / (std::string(r->name) + ".arff"), DatasetFormat::kArff, {r->labels, true, {}});
    const auto sois = pair_miss_percentage(d, split_sois(d, config(Method::kSecondOrder, 10, 0))).mean;
    const auto kfold = pair_miss_percentage(d, split_kfold(d, config(Method::kKFold, 10, 0))).mean;
    const double secs = seconds_since(t0);
    const bool good = std::abs(sois - r->pair_miss) <= 0.05 && sois < kfold && secs < 60.0;
    ok = ok && good;
    detail += std::string(r->name) + " sois=" + fmt("%.4f", sois) + " ref=" + fmt("%.3f", r->pair_miss) +
              " kfold=" + fmt("%.4f", kfold) + " t=" + fmt("%.1fs", secs) + "; ";
  }
  return {ok ? Outcome::kPass : Outcome::kFail, detail};
}

// 2 and 7 -----------------------------------------------------------------------

struct SuiteMeans {
  double pair_miss[3] = {0, 0, 0};  // kfold, is, sois
  double lpd[3] = {0, 0, 0};
  double ld[3] = {0, 0, 0};
  double q_diff[3] = {0, 0, 0};  // weighted graphs
  double seconds = 0.0;  // splitting and statistical measures, network excluded
};

SuiteMeans synthetic_suite() {
  constexpr std::size_t kDatasets = 100;
  SuiteMeans m;
  const Method methods[] = {Method::kKFold, Method::kIterative, Method::kSecondOrder};
  double network_seconds = 0.0;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < kDatasets; ++seed) {
    const auto d = random_dataset(200, 10, 0.1, seed);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto a = stratify(d, config(methods[i], 10, seed));
      const auto s = compute_fold_stats(d, a);
      m.pair_miss[i] += s.pair_miss_pct_mean / kDatasets;
      m.lpd[i] += s.lpd / kDatasets;
      m.ld[i] += s.ld / kDatasets;
      const auto t1 = Clock::now();
      m.q_diff[i] += network_for_folds(d, a, true).q_diff_mean / kDatasets;
      network_seconds += seconds_since(t1);
    }
  }
  m.seconds = seconds_since(t0) - network_seconds;
  return m;
}

Verdict ordering(const SuiteMeans& m, double total_seconds) {
  const bool pm = m.pair_miss[2] < m.pair_miss[1] && m.pair_miss[1] < m.pair_miss[0];
  const bool lpd = m.lpd[2] < m.lpd[1] && m.lpd[1] < m.lpd[0];
  const bool ld = m.ld[1] <= m.ld[2] && m.ld[2] < m.ld[0];
  const bool fast = total_seconds < 120.0;
  std::string detail = "pair_miss sois/is/kfold=" + fmt("%.4f", m.pair_miss[2]) + "/" + fmt("%.4f", m.pair_miss[1]) +
                       "/" + fmt("%.4f", m.pair_miss[0]) + " lpd=" + fmt("%.4f", m.lpd[2]) + "/" +
                       fmt("%.4f", m.lpd[1]) + "/" + fmt("%.4f", m.lpd[0]) + " ld=" + fmt("%.4f", m.ld[2]) + "/" +
                       fmt("%.4f", m.ld[1]) + "/" + fmt("%.4f", m.ld[0]) + " t=" + fmt("%.1fs", total_seconds);
  return {pm && lpd && ld && fast ? Outcome::kPass : Outcome::kFail, detail};
}

Verdict network_trend(const SuiteMeans& m) {
  const bool ok = m.q_diff[2] <= m.q_diff[0];
  return {ok ? Outcome::kPass : Outcome::kFail,
          "mean |Q_train - Q_test| weighted: sois=" + fmt("%.5f", m.q_diff[2]) + " is=" + fmt("%.5f", m.q_diff[1]) +
              " kfold=" + fmt("%.5f", m.q_diff[0])};
}

// 3 -----------------------------------------------------------------------------

// Calls fn on every multiset of n label sets over `labels` labels, i.e. every
// dataset up to reordering of samples.
void for_each_dataset(std::size_t n, std::size_t labels,
                      const std::function<void(const MultiLabelDataset&)>& fn) {
  const std::size_t kinds = std::size_t{1} << labels;
  std::vector<std::size_t> pick(n, 0);
  for (;;) {
    std::vector<std::vector<LabelIndex>> sets(n);
    for (std::size_t s = 0; s < n; ++s)
      for (LabelIndex l = 0; l < labels; ++l)
        if (pick[s] >> l & 1) sets[s].push_back(l);
    fn(MultiLabelDataset(labels, sets));
    // next non-decreasing sequence
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == kinds - 1) --i;
    if (i == 0) return;
    const auto v = pick[i - 1] + 1;
    for (std::size_t j = i - 1; j < n; ++j) pick[j] = v;
  }
}

Verdict oracle_equivalence() {
  std::size_t cases = 0, mismatches = 0;
  double worst = 0.0;
  std::string first;
  auto check = [&](double got, double want, const char* what, const MultiLabelDataset& d,
                   const std::vector<std::size_t>& fold_of) {
    const double err = std::abs(got - want);
    worst = std::max(worst, err);
    if (err <= 1e-9) return;
    if (mismatches++ == 0) {
      first = std::string(what) + " on n=" + std::to_string(d.n_samples()) + " L=" + std::to_string(d.n_labels()) +
              " folds=";
      for (auto f : fold_of) first += std::to_string(f);
    }
  };

  for (std::size_t labels = 1; labels <= 3; ++labels) {
    for (std::size_t n = 2; n <= 8; ++n) {
      for_each_dataset(n, labels, [&](const MultiLabelDataset& d) {
        // Fold 1 never empty; mask bit s puts sample s in fold 1.
        for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
          FoldAssignment a;
          a.k = 2;
          a.fold_of.resize(n);
          for (std::size_t s = 0; s < n; ++s) a.fold_of[s] = mask >> s & 1;
          const auto stats = compute_fold_stats(d, a);
          check(stats.ld, oracle::ld(d, a.fold_of, 2), "ld", d, a.fold_of);
          check(stats.lpd, oracle::lpd(d, a.fold_of, 2), "lpd", d, a.fold_of);
          check(stats.ed, oracle::ed(a.fold_of, 2), "ed", d, a.fold_of);
          const auto z = oracle::zeros(d, a.fold_of, 2);
          check(static_cast<double>(stats.fz), static_cast<double>(z.fz), "fz", d, a.fold_of);
          check(static_cast<double>(stats.flz), static_cast<double>(z.flz), "flz", d, a.fold_of);
          check(static_cast<double>(stats.flpz), static_cast<double>(z.flpz), "flpz", d, a.fold_of);
          const auto [mean, std] = oracle::pair_miss(d, a.fold_of, 2);
          check(stats.pair_miss_pct_mean, mean, "pair_miss_mean", d, a.fold_of);
          check(stats.pair_miss_pct_std, std, "pair_miss_std", d, a.fold_of);
          ++cases;
        }
      });
    }
  }
  std::string detail = std::to_string(cases) + " (dataset, assignment) cases, max abs error " + fmt("%.3g", worst);
  if (mismatches) detail += ", " + std::to_string(mismatches) + " mismatches, first: " + first;
  return {mismatches == 0 ? Outcome::kPass : Outcome::kFail, detail};
}

// 4 -----------------------------------------------------------------------------

Verdict modularity_exactness() {
  const CoOccurrenceGraph bridge(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
  const std::vector<std::size_t> triangles{0, 0, 0, 1, 1, 1};
  const double q = modularity(bridge, Partition::normalized(triangles));
  const bool bridge_ok = std::abs(q - 5.0 / 14.0) <= 1e-12;
  const std::vector<std::size_t> one(6, 0);
  const bool one_ok = modularity(bridge, Partition::normalized(one)) == 0.0;

  Rng rng(0);
  std::size_t matched = 0;
  double worst = 0.0;
  constexpr std::size_t kGraphs = 50;
  for (std::size_t t = 0; t < kGraphs; ++t) {
    const auto g = oracle::random_graph(2 + rng.below(6), 0.5, 0, rng);
    const double gap = oracle::max_modularity(g) - fastgreedy_communities(g).modularity;
    worst = std::max(worst, gap);
    matched += gap <= 1e-9;
  }
  const bool greedy_ok = matched == kGraphs;
  return {bridge_ok && one_ok && greedy_ok ? Outcome::kPass : Outcome::kFail,
          "bridge Q=" + fmt("%.15f", q) + " single-community Q=" + (one_ok ? "0" : "nonzero") + " fastgreedy optimal on " +
              std::to_string(matched) + "/" + std::to_string(kGraphs) + " graphs (largest gap " +
              fmt("%.4f", worst) + ")"};
}

// 5 -----------------------------------------------------------------------------

Verdict partition_fuzz() {
  constexpr Method methods[] = {Method::kKFold, Method::kLabelset, Method::kIterative, Method::kSecondOrder};
  Rng meta(5);
  std::size_t bad_partition = 0, nondeterministic = 0, runs = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + meta.below(120);
    const std::size_t labels = 1 + meta.below(12);
    const double density = 0.02 + 0.5 * static_cast<double>(meta.below(1000)) / 1000.0;
    const auto d = random_dataset(n, labels, density, meta.next());
    const std::size_t k = 2 + meta.below(std::min<std::size_t>(n - 1, 10));
    const auto seed = meta.next();
    for (auto m : methods) {
      auto c = config(m, k, seed);
      c.shuffle = t % 2 == 1;
      const auto a = stratify(d, c);
      ++runs;
      std::vector<std::size_t> seen;
      for (const auto& f : a.folds()) seen.insert(seen.end(), f.begin(), f.end());
      std::sort(seen.begin(), seen.end());
      bool exact = seen.size() == n && a.n_samples() == n;
      for (std::size_t s = 0; exact && s < n; ++s) exact = seen[s] == s;
      bad_partition += !exact;
      nondeterministic += folds_to_string(a) != folds_to_string(stratify(d, c));
    }
  }
  return {bad_partition == 0 && nondeterministic == 0 ? Outcome::kPass : Outcome::kFail,
          std::to_string(runs) + " splits, " + std::to_string(bad_partition) + " non-partitions, " +
              std::to_string(nondeterministic) + " non-identical reruns"};
}

// 6 -----------------------------------------------------------------------------

Verdict fallback_equivalence() {
  Rng meta(6);
  std::size_t differ = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::size_t n = 10 + meta.below(150);
    const std::size_t labels = 1 + meta.below(10);
    std::vector<std::vector<LabelIndex>> sets(n);
    for (auto& s : sets)
      if (meta.below(5) != 0) s.push_back(static_cast<LabelIndex>(meta.below(labels)));
    const MultiLabelDataset d(labels, sets);
    const std::size_t k = 2 + meta.below(9);
    differ += fold_multiset(split_sois(d, config(Method::kSecondOrder, k, t))) !=
              fold_multiset(split_is(d, config(Method::kIterative, k, t)));
  }
  return {differ == 0 ? Outcome::kPass : Outcome::kFail,
          "50 datasets without co-occurrence, " + std::to_string(differ) + " differing fold multisets"};
}

void report(int id, const char* title, const Verdict& v, bool& failed) {
  const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "SKIP";
  std::printf("%s criterion %d (%s): %s\n", tag, id, title, v.detail.c_str());
  std::fflush(stdout);
  failed = failed || v.outcome == Outcome::kFail;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path data_dir;
  if (argc > 1) data_dir = argv[1];
  else if (const char* env = std::getenv("MLSTRAT_DATA_DIR")) data_dir = env;

  bool failed = false;
  try {
    report(1, "published pair-miss values", desk_reproduction(data_dir), failed);

    const auto suite = synthetic_suite();
    report(2, "synthetic ordering", ordering(suite, suite.seconds), failed);

    report(3, "oracle equivalence", oracle_equivalence(), failed);
    report(4, "modularity exactness", modularity_exactness(), failed);
    report(5, "partition and determinism fuzz", partition_fuzz(), failed);
    report(6, "fallback equivalence", fallback_equivalence(), failed);
    report(7, "network stability trend", network_trend(suite), failed);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  return failed ? 1 : 0;
}
