// mlstrat: split multi-label datasets into folds, audit them, inspect label
// co-occurrence communities and run benchmark configs.
//
// Exit codes: 0 success, 1 bad input, 2 invariant violation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "mlstrat/mlstrat.hpp"

namespace fs = std::filesystem;
using namespace mlstrat;

namespace {

struct InputOptions {
  std::string path;
  std::string format = "arff";
  std::size_t labels = 0;
  bool labels_at_start = false;
  std::vector<std::string> label_names;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--input", path, "dataset file")->required();
    cmd->add_option("--format", format, "arff or canonical")->check(CLI::IsMember({"arff", "canonical"}));
    cmd->add_option("--labels", labels, "number of label attributes (arff)");
    cmd->add_flag("--labels-at-start", labels_at_start, "label attributes come first (arff)");
    cmd->add_option("--label-names", label_names, "label attributes by name (arff)")->delimiter(',');
  }

  MultiLabelDataset load() const {
    const auto f = parse_format(format);
    if (f == DatasetFormat::kArff && labels == 0 && label_names.empty())
      throw InputError("arff input needs --labels or --label-names");
    return load_dataset(path, f, {labels, !labels_at_start, label_names});
  }
};

nlohmann::ordered_json stats_json(const FoldStats& s) {
  nlohmann::ordered_json j;
  j["ld"] = s.ld;
  j["lpd"] = s.lpd;
  j["ed"] = s.ed;
  j["fz"] = s.fz;
  j["flz"] = s.flz;
  j["flpz"] = s.flpz;
  j["pair_miss_mean"] = s.pair_miss_pct_mean;
  j["pair_miss_std"] = s.pair_miss_pct_std;
  j["ratio_clamped"] = s.ratio_clamped;
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& key : s.skipped_labels) skipped.push_back(key.lo);
  j["labels_without_support"] = skipped;
  return j;
}

nlohmann::ordered_json network_json(const NetworkReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["train_q_mean"] = r.train_q_mean;
  j["train_q_std"] = r.train_q_std;
  j["train_count_std"] = r.train_count_std;
  j["test_count_std"] = r.test_count_std;
  j["train_size_std"] = r.train_size_std;
  j["test_size_std"] = r.test_size_std;
  j["unique_communities"] = r.unique_communities;
  j["unique_partitions"] = r.unique_partitions;
  j["matched"] = r.matched_partitions;
  j["q_diff_mean"] = r.q_diff_mean;
  j["q_diff_std"] = r.q_diff_std;
  auto folds = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < r.k; ++f) {
    nlohmann::ordered_json fold;
    fold["train_q"] = r.train[f].modularity;
    fold["test_q"] = r.test[f].modularity;
    fold["train"] = partition_to_json(r.train[f].partition);
    fold["test"] = partition_to_json(r.test[f].partition);
    folds.push_back(fold);
  }
  j["folds"] = folds;
  return j;
}

FoldAssignment read_fold_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return read_folds(in);
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label fold stratification and fold-quality audit"};
  app.require_subcommand(1);

  InputOptions split_in;
  std::string method = "sois", split_out;
  StratifierConfig scfg;
  bool selected_only = false, any_label = false;
  auto* split = app.add_subcommand("split", "split a dataset into k folds");
  split_in.add_to(split);
  split->add_option("--method", method, "kfold, labelset, is or sois")
      ->check(CLI::IsMember({"kfold", "labelset", "is", "sois"}));
  split->add_option("--folds", scfg.k, "number of folds");
  split->add_option("--seed", scfg.seed, "random seed");
  split->add_option("--proportions", scfg.proportions, "fold proportions (default uniform)")->delimiter(',');
  split->add_flag("--shuffle", scfg.shuffle, "shuffle before windowing (kfold)");
  split->add_flag("--selected-key-updates", selected_only, "only update the selected key's desirability");
  split->add_flag("--any-label-support", any_label, "a pair is evidenced by either of its labels");
  split->add_option("--output", split_out, "fold JSON file (stdout when omitted)");

  InputOptions audit_in;
  std::string audit_folds, audit_out;
  auto* audit = app.add_subcommand("audit", "fold-quality measures for a fold file");
  audit_in.add_to(audit);
  audit->add_option("--folds", audit_folds, "fold JSON file")->required();
  audit->add_option("--output", audit_out, "JSON report (stdout when omitted)");

  InputOptions graph_in;
  std::string graph_folds, graph_out;
  bool weighted = false;
  auto* graph = app.add_subcommand("graph", "label co-occurrence communities per fold");
  graph_in.add_to(graph);
  graph->add_flag("--weighted", weighted, "weight edges by co-occurrence count");
  graph->add_option("--folds", graph_folds, "fold JSON file (whole dataset when omitted)");
  graph->add_option("--output", graph_out, "output directory")->required();

  std::string bench_cfg, bench_out;
  auto* bench = app.add_subcommand("bench", "run an experiment config and write reports");
  bench->add_option("--config", bench_cfg, "key = value experiment file")->required();
  bench->add_option("--out", bench_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*split) {
      const auto d = split_in.load();
      scfg.method = parse_method(method);
      if (selected_only) scfg.counter_update = CounterUpdate::kSelectedKeyOnly;
      if (any_label) scfg.support = SupportMode::kAnyLabel;
      const auto a = stratify(d, scfg);
      if (split_out.empty()) {
        write_folds(a, std::cout);
      } else {
        std::ofstream out(split_out, std::ios::binary);
        if (!out) throw InputError("cannot write " + split_out);
        write_folds(a, out);
      }
    } else if (*audit) {
      const auto d = audit_in.load();
      const auto a = read_fold_file(audit_folds);
      if (a.n_samples() != d.n_samples())
        throw InvariantError("fold file covers " + std::to_string(a.n_samples()) + " samples, dataset has " +
                             std::to_string(d.n_samples()));
      const auto j = stats_json(compute_fold_stats(d, a));
      if (audit_out.empty()) std::cout << j.dump(2) << '\n';
      else write_json(audit_out, j);
    } else if (*graph) {
      const auto d = graph_in.load();
      std::error_code ec;
      fs::create_directories(graph_out, ec);
      if (ec) throw InputError("cannot create " + graph_out + ": " + ec.message());
      const auto whole = detect_communities(build_graph(d, weighted));
      nlohmann::ordered_json all;
      all["weighted"] = weighted;
      all["modularity"] = whole.modularity;
      all["partition"] = partition_to_json(whole.partition);
      write_json(fs::path(graph_out) / "communities.json", all);
      if (!graph_folds.empty()) {
        const auto a = read_fold_file(graph_folds);
        write_json(fs::path(graph_out) / "network.json", network_json(network_for_folds(d, a, weighted)));
      }
    } else if (*bench) {
      auto cfg = load_config(bench_cfg);
      cfg.output_dir = bench_out;
      const auto result = run_experiment(cfg);
      emit_report(result);
      for (const auto& s : result.status)
        if (!s.ok) std::cerr << "mlstrat: dataset " << s.name << " failed: " << s.error << '\n';
      return result.ok() ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "mlstrat: " << e.what() << '\n';
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "mlstrat: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "mlstrat: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
