#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "mlstrat/arff.hpp"
#include "mlstrat/canonical.hpp"
#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"
#include "mlstrat/fold_io.hpp"
#include "mlstrat/metrics.hpp"
#include "mlstrat/network.hpp"
#include "mlstrat/ranks.hpp"
#include "mlstrat/stratify.hpp"

namespace mlstrat {

enum class DatasetFormat { kArff, kCanonical };

inline DatasetFormat parse_format(std::string_view s) {
  if (s == "arff") return DatasetFormat::kArff;
  if (s == "canonical") return DatasetFormat::kCanonical;
  throw InputError("unknown dataset format '" + std::string(s) + "' (expected arff or canonical)");
}

inline std::string_view format_name(DatasetFormat f) {
  return f == DatasetFormat::kArff ? "arff" : "canonical";
}

/// Reads a dataset file; `labels` only matters for ARFF.
inline MultiLabelDataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                                      const ArffLabelLocator& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return format == DatasetFormat::kArff ? parse_arff(in, labels) : parse_canonical(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

struct DatasetEntry {
  std::string name;
  std::string path;  // as written in the config
  DatasetFormat format = DatasetFormat::kArff;
  ArffLabelLocator labels;
};

// Statistical measures, in report column order.
inline const std::vector<std::string>& statistical_measures() {
  static const std::vector<std::string> names{"ld", "lpd", "ed", "fz", "flz", "flpz",
                                              "pair_miss_mean", "pair_miss_std"};
  return names;
}

// Network measures; reported with an "fg_" (unweighted) or "fgw_" (weighted) prefix.
inline const std::vector<std::string>& network_measures() {
  static const std::vector<std::string> names{
      "train_q_mean",    "train_q_std",        "train_count_std",   "test_count_std",
      "train_size_std",  "test_size_std",      "unique_communities", "unique_partitions",
      "matched",         "q_diff_mean",        "q_diff_std"};
  return names;
}

inline Direction default_direction(std::string_view measure) {
  for (std::string_view prefix : {"fg_", "fgw_"}) {
    if (measure.substr(0, prefix.size()) == prefix) {
      const auto base = measure.substr(prefix.size());
      if (base == "matched" || base == "train_q_mean") return Direction::kHigherIsBetter;
    }
  }
  return Direction::kLowerIsBetter;
}

struct ExperimentConfig {
  std::vector<DatasetEntry> datasets;
  std::vector<Method> methods;
  std::size_t k = 10;
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::string> measures = statistical_measures();
  std::map<std::string, Direction> directions;  // overrides of default_direction
  bool network = false;
  bool shuffle = false;
  std::filesystem::path base_dir;  // dataset paths are relative to this
  std::filesystem::path output_dir;

  bool known_measure(const std::string& m) const {
    for (const auto& s : statistical_measures())
      if (m == s) return true;
    if (!network) return false;
    for (const auto& s : network_measures())
      if (m == "fg_" + s || m == "fgw_" + s) return true;
    return false;
  }

  Direction direction_of(const std::string& measure) const {
    const auto it = directions.find(measure);
    return it == directions.end() ? default_direction(measure) : it->second;
  }

  void validate() const {
    if (k < 2) throw InputError("k must be at least 2");
    if (datasets.empty()) throw InputError("config lists no datasets");
    if (methods.empty()) throw InputError("config lists no methods");
    if (seeds.empty()) throw InputError("config lists no seeds");
    if (measures.empty()) throw InputError("config lists no measures");
    for (const auto& m : measures)
      if (!known_measure(m))
        throw InputError("unknown measure '" + m + "'" + (network ? "" : " (network measures need network = true)"));
    std::map<std::string, int> names;
    for (const auto& d : datasets)
      if (++names[d.name] > 1) throw InputError("dataset '" + d.name + "' listed twice");
  }

  /// Every semantic field in a fixed textual form; output_dir is not semantic.
  std::string canonical_text() const {
    std::ostringstream out;
    out << "k=" << k << "\nshuffle=" << shuffle << "\nnetwork=" << network << "\nmethods=";
    for (auto m : methods) out << method_name(m) << ',';
    out << "\nseeds=";
    for (auto s : seeds) out << s << ',';
    out << "\nmeasures=";
    for (const auto& m : measures) out << m << ':' << (direction_of(m) == Direction::kLowerIsBetter ? "lower" : "higher") << ',';
    for (const auto& d : datasets) {
      out << "\ndataset=" << d.name << '|' << d.path << '|' << format_name(d.format) << '|'
          << d.labels.label_count << '|' << d.labels.labels_at_end << '|';
      for (const auto& n : d.labels.label_names) out << n << ',';
    }
    out << '\n';
    return out.str();
  }

  /// 64-bit FNV-1a of canonical_text().
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

namespace config_detail {

inline std::string trim(std::string_view s) { return std::string(arff_detail::trim(s)); }

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

inline bool parse_bool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError(line, "expected true or false, got '" + v + "'");
}

template <typename T>
T parse_uint(const std::string& v, std::size_t line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError(line, "expected a non-negative integer, got '" + v + "'");
  return out;
}

}  // namespace config_detail

/// Parses the key = value experiment file:
///
///   k = 10
///   methods = kfold, labelset, is, sois
///   seeds = 0, 1
///   measures = ld, lpd, pair_miss_mean
///   network = true
///   direction.fg_unique_communities = higher
///
///   [dataset yeast]
///   path = yeast.arff
///   format = arff
///   labels = 14
///
/// '#' starts a comment line.
inline ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
  using namespace config_detail;
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  DatasetEntry* current = nullptr;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(line, "unterminated section header");
      const auto inner = trim(std::string_view(text).substr(1, text.size() - 2));
      if (inner.rfind("dataset", 0) != 0) throw ParseError(line, "unknown section '" + inner + "'");
      auto name = trim(std::string_view(inner).substr(7));
      if (name.empty()) throw ParseError(line, "dataset section needs a name");
      current = &cfg.datasets.emplace_back();
      current->name = std::move(name);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const auto key = trim(std::string_view(text).substr(0, eq));
    const auto value = trim(std::string_view(text).substr(eq + 1));
    try {
      if (current) {
        if (key == "path") current->path = value;
        else if (key == "format") current->format = parse_format(value);
        else if (key == "labels") current->labels.label_count = parse_uint<std::size_t>(value, line);
        else if (key == "labels_at_start") current->labels.labels_at_end = !parse_bool(value, line);
        else if (key == "label_names") current->labels.label_names = split_list(value);
        else throw ParseError(line, "unknown dataset key '" + key + "'");
        continue;
      }
      if (key == "k") cfg.k = parse_uint<std::size_t>(value, line);
      else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& m : split_list(value)) cfg.methods.push_back(parse_method(m));
      } else if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto& s : split_list(value)) cfg.seeds.push_back(parse_uint<std::uint64_t>(s, line));
      } else if (key == "measures") cfg.measures = split_list(value);
      else if (key == "network") cfg.network = parse_bool(value, line);
      else if (key == "shuffle") cfg.shuffle = parse_bool(value, line);
      else if (key.rfind("direction.", 0) == 0) {
        if (value != "lower" && value != "higher") throw ParseError(line, "direction must be lower or higher");
        cfg.directions[key.substr(10)] = value == "lower" ? Direction::kLowerIsBetter : Direction::kHigherIsBetter;
      } else throw ParseError(line, "unknown key '" + key + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line, e.what());
    }
  }
  for (const auto& d : cfg.datasets)
    if (d.path.empty()) throw InputError("dataset '" + d.name + "' has no path");
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

struct RunRecord {
  std::string dataset;
  std::string method;
  std::uint64_t seed = 0;
  std::string fold_file;  // relative to the output directory
  FoldStats stats;
  std::optional<NetworkReport> unweighted;
  std::optional<NetworkReport> weighted;

  /// Value of a measure name as used in configs and reports.
  double measure(const std::string& name) const {
    if (name == "ld") return stats.ld;
    if (name == "lpd") return stats.lpd;
    if (name == "ed") return stats.ed;
    if (name == "fz") return static_cast<double>(stats.fz);
    if (name == "flz") return static_cast<double>(stats.flz);
    if (name == "flpz") return static_cast<double>(stats.flpz);
    if (name == "pair_miss_mean") return stats.pair_miss_pct_mean;
    if (name == "pair_miss_std") return stats.pair_miss_pct_std;
    const bool w = name.rfind("fgw_", 0) == 0;
    const bool u = !w && name.rfind("fg_", 0) == 0;
    const auto& report = w ? weighted : unweighted;
    if ((w || u) && report) {
      const auto base = name.substr(w ? 4 : 3);
      const auto& r = *report;
      if (base == "train_q_mean") return r.train_q_mean;
      if (base == "train_q_std") return r.train_q_std;
      if (base == "train_count_std") return r.train_count_std;
      if (base == "test_count_std") return r.test_count_std;
      if (base == "train_size_std") return r.train_size_std;
      if (base == "test_size_std") return r.test_size_std;
      if (base == "unique_communities") return static_cast<double>(r.unique_communities);
      if (base == "unique_partitions") return static_cast<double>(r.unique_partitions);
      if (base == "matched") return static_cast<double>(r.matched_partitions);
      if (base == "q_diff_mean") return r.q_diff_mean;
      if (base == "q_diff_std") return r.q_diff_std;
    }
    throw InputError("measure '" + name + "' is not available for this run");
  }
};

struct DatasetStatus {
  std::string name;
  bool ok = true;
  std::string error;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  std::vector<DatasetStatus> status;

  bool ok() const {
    for (const auto& s : status)
      if (!s.ok) return false;
    return true;
  }
};

inline std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Splits every dataset with every method and seed, audits the folds and
/// writes fold files plus manifest.json into cfg.output_dir. A dataset that
/// fails to load or split is recorded in the manifest and skipped.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir / "folds", ec);
  if (ec) throw InputError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

  ExperimentResult result;
  result.config = cfg;
  for (const auto& entry : cfg.datasets) {
    DatasetStatus status{entry.name, true, {}};
    std::vector<RunRecord> runs;
    try {
      const fs::path path = fs::path(entry.path).is_absolute() ? fs::path(entry.path) : cfg.base_dir / entry.path;
      const auto d = load_dataset(path, entry.format, entry.labels);
      for (auto method : cfg.methods) {
        for (auto seed : cfg.seeds) {
          StratifierConfig sc;
          sc.k = cfg.k;
          sc.seed = seed;
          sc.method = method;
          sc.shuffle = cfg.shuffle;
          const auto a = stratify(d, sc);
          if (a.n_samples() != d.n_samples()) throw InvariantError("split lost samples");
          a.validate();

          RunRecord run;
          run.dataset = entry.name;
          run.method = std::string(method_name(method));
          run.seed = seed;
          run.fold_file = "folds/" + entry.name + "__" + run.method + "__seed" + std::to_string(seed) + ".json";
          run.stats = compute_fold_stats(d, a);
          if (cfg.network) {
            run.unweighted = network_for_folds(d, a, false);
            run.weighted = network_for_folds(d, a, true);
          }
          std::ofstream out(cfg.output_dir / run.fold_file, std::ios::binary);
          if (!out) throw InputError("cannot write " + (cfg.output_dir / run.fold_file).string());
          write_folds(a, out);
          runs.push_back(std::move(run));
        }
      }
    } catch (const std::exception& e) {
      status.ok = false;
      status.error = e.what();
      runs.clear();
    }
    for (auto& r : runs) result.runs.push_back(std::move(r));
    result.status.push_back(std::move(status));
  }

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = hex64(cfg.hash());
  manifest["k"] = cfg.k;
  std::vector<std::string> methods;
  for (auto m : cfg.methods) methods.emplace_back(method_name(m));
  manifest["methods"] = methods;
  manifest["seeds"] = cfg.seeds;
  manifest["measures"] = cfg.measures;
  manifest["network"] = cfg.network;
  manifest["shuffle"] = cfg.shuffle;
  auto datasets = nlohmann::ordered_json::array();
  for (const auto& s : result.status) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["status"] = s.ok ? "ok" : "error";
    if (!s.ok) j["error"] = s.error;
    datasets.push_back(j);
  }
  manifest["datasets"] = datasets;
  auto files = nlohmann::ordered_json::array();
  for (const auto& r : result.runs) files.push_back(r.fold_file);
  manifest["fold_files"] = files;
  std::ofstream out(cfg.output_dir / "manifest.json", std::ios::binary);
  if (!out) throw InputError("cannot write manifest in " + cfg.output_dir.string());
  out << manifest.dump(2) << '\n';
  return result;
}

/// Ranks of each method per measure over the datasets that ran, after
/// averaging each (dataset, method) over seeds.
inline RankTable rank_result(const ExperimentResult& result) {
  const auto& cfg = result.config;
  std::vector<std::string> methods, datasets;
  for (auto m : cfg.methods) methods.emplace_back(method_name(m));
  for (const auto& s : result.status)
    if (s.ok) datasets.push_back(s.name);

  RawValues values;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> counts;
  for (const auto& run : result.runs) {
    for (const auto& measure : cfg.measures) {
      const std::tuple key{measure, run.dataset, run.method};
      values[key] += run.measure(measure);
      ++counts[key];
    }
  }
  for (auto& [key, v] : values) v /= static_cast<double>(counts[key]);

  std::map<std::string, Direction> directions;
  for (const auto& m : cfg.measures) directions[m] = cfg.direction_of(m);
  return average_ranks(values, cfg.measures, datasets, methods, directions);
}

/// Writes ranks.csv, metrics.csv, network.csv and long.csv into the output
/// directory. Contents depend only on the config and seeds.
inline void emit_report(const ExperimentResult& result) {
  const auto& cfg = result.config;
  if (cfg.measures.empty()) throw InputError("report needs at least one measure");
  const auto& dir = cfg.output_dir;
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    return out;
  };

  {
    auto out = open("metrics.csv");
    out << "dataset,method,seed";
    for (const auto& m : statistical_measures()) out << ',' << m;
    out << ",ratio_clamped\n";
    for (const auto& r : result.runs) {
      out << r.dataset << ',' << r.method << ',' << r.seed;
      for (const auto& m : statistical_measures()) out << ',' << format_number(r.measure(m));
      out << ',' << (r.stats.ratio_clamped ? 1 : 0) << '\n';
    }
  }
  {
    auto out = open("network.csv");
    out << "dataset,method,seed,graph";
    for (const auto& m : network_measures()) out << ',' << m;
    out << '\n';
    for (const auto& r : result.runs) {
      for (const auto& [prefix, label] : {std::pair{"fg_", "unweighted"}, std::pair{"fgw_", "weighted"}}) {
        if (!(prefix == std::string("fg_") ? r.unweighted : r.weighted)) continue;
        out << r.dataset << ',' << r.method << ',' << r.seed << ',' << label;
        for (const auto& m : network_measures()) out << ',' << format_number(r.measure(prefix + m));
        out << '\n';
      }
    }
  }
  {
    auto out = open("long.csv");
    out << "dataset,method,seed,measure,value\n";
    for (const auto& r : result.runs)
      for (const auto& m : cfg.measures)
        out << r.dataset << ',' << r.method << ',' << r.seed << ',' << m << ',' << format_number(r.measure(m)) << '\n';
  }
  {
    auto out = open("ranks.csv");
    out << "measure,method,average_rank\n";
    bool any = false;
    for (const auto& s : result.status) any = any || s.ok;
    if (any) {
      const auto table = rank_result(result);
      for (std::size_t mi = 0; mi < table.measures.size(); ++mi)
        for (std::size_t me = 0; me < table.methods.size(); ++me)
          out << table.measures[mi] << ',' << table.methods[me] << ',' << format_number(table.average[mi][me]) << '\n';
    }
  }
}

}  // namespace mlstrat
