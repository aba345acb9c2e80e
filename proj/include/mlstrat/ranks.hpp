#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mlstrat/error.hpp"

namespace mlstrat {

enum class Direction { kLowerIsBetter, kHigherIsBetter };

/// Ranks 1..m (1 = best). Tied values share the mean of their positions.
inline std::vector<double> rank_values(std::span<const double> values, Direction dir) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dir == Direction::kLowerIsBetter ? values[a] < values[b] : values[a] > values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

/// (measure, dataset, method) -> value
using RawValues = std::map<std::tuple<std::string, std::string, std::string>, double>;

struct RankTable {
  std::vector<std::string> measures;
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> average;                  // [measure][method]
  std::vector<std::vector<std::vector<double>>> per_dataset;  // [measure][dataset][method]

  double average_rank(const std::string& measure, const std::string& method) const {
    const auto mi = std::find(measures.begin(), measures.end(), measure) - measures.begin();
    const auto me = std::find(methods.begin(), methods.end(), method) - methods.begin();
    if (mi == static_cast<std::ptrdiff_t>(measures.size()) ||
        me == static_cast<std::ptrdiff_t>(methods.size()))
      throw InputError("no rank for " + measure + "/" + method);
    return average[mi][me];
  }
};

/// Ranks methods within each dataset and averages the ranks over datasets.
/// `directions` defaults to lower-is-better for measures it does not list.
inline RankTable average_ranks(const RawValues& values, const std::vector<std::string>& measures,
                               const std::vector<std::string>& datasets,
                               const std::vector<std::string>& methods,
                               const std::map<std::string, Direction>& directions = {}) {
  if (measures.empty() || datasets.empty() || methods.empty())
    throw InputError("ranking needs at least one measure, dataset and method");
  RankTable t{measures, methods, datasets, {}, {}};
  for (const auto& measure : measures) {
    const auto it = directions.find(measure);
    const auto dir = it == directions.end() ? Direction::kLowerIsBetter : it->second;
    std::vector<double> sum(methods.size(), 0.0);
    auto& rows = t.per_dataset.emplace_back();
    for (const auto& dataset : datasets) {
      std::vector<double> row;
      for (const auto& method : methods) {
        const auto cell = values.find({measure, dataset, method});
        if (cell == values.end())
          throw InputError("missing value for measure '" + measure + "', dataset '" + dataset +
                           "', method '" + method + "'");
        row.push_back(cell->second);
      }
      auto ranks = rank_values(row, dir);
      for (std::size_t m = 0; m < methods.size(); ++m) sum[m] += ranks[m];
      rows.push_back(std::move(ranks));
    }
    for (auto& s : sum) s /= static_cast<double>(datasets.size());
    t.average.push_back(std::move(sum));
  }
  return t;
}

}  // namespace mlstrat
