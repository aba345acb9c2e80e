#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"

namespace mlstrat {

struct Edge {
  LabelIndex lo = 0;
  LabelIndex hi = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected label co-occurrence graph over all labels of a dataset.
/// Edges are canonical (lo < hi) and sorted; weights, when present, count the
/// samples holding both endpoint labels.
class CoOccurrenceGraph {
 public:
  CoOccurrenceGraph() = default;

  CoOccurrenceGraph(std::size_t n_vertices, std::vector<Edge> edges,
                    std::optional<std::vector<std::uint64_t>> weights = std::nullopt)
      : n_vertices_(n_vertices), edges_(std::move(edges)), weights_(std::move(weights)) {
    if (weights_ && weights_->size() != edges_.size())
      throw InputError("edge and weight counts differ");
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].lo >= edges_[e].hi) throw InputError("edges must satisfy lo < hi");
      if (edges_[e].hi >= n_vertices_) throw InputError("edge endpoint out of range");
      if (e > 0 && !(edges_[e - 1] < edges_[e])) throw InputError("edges must be sorted and unique");
      if (weights_ && (*weights_)[e] == 0) throw InputError("edge weights must be >= 1");
    }
  }

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool weighted() const noexcept { return weights_.has_value(); }
  const std::optional<std::vector<std::uint64_t>>& weights() const noexcept { return weights_; }

  std::uint64_t weight(std::size_t edge) const { return weights_ ? (*weights_)[edge] : 1; }

  std::uint64_t total_weight() const {
    std::uint64_t w = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) w += weight(e);
    return w;
  }

  /// Weighted degree of every vertex (plain degree when unweighted).
  std::vector<std::uint64_t> strengths() const {
    std::vector<std::uint64_t> s(n_vertices_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      s[edges_[e].lo] += weight(e);
      s[edges_[e].hi] += weight(e);
    }
    return s;
  }

  bool operator==(const CoOccurrenceGraph&) const = default;

 private:
  std::size_t n_vertices_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::vector<std::uint64_t>> weights_;
};

/// Co-occurrence graph restricted to the given samples.
inline CoOccurrenceGraph build_graph(const MultiLabelDataset& d, bool weighted,
                                     std::span<const std::size_t> samples) {
  std::map<Edge, std::uint64_t> counts;
  for (auto s : samples) {
    const auto ys = d.labels_of(s);
    for (std::size_t a = 0; a < ys.size(); ++a)
      for (std::size_t b = a + 1; b < ys.size(); ++b) ++counts[Edge{ys[a], ys[b]}];
  }
  std::vector<Edge> edges;
  std::vector<std::uint64_t> weights;
  for (const auto& [edge, count] : counts) {
    edges.push_back(edge);
    weights.push_back(count);
  }
  if (!weighted) return CoOccurrenceGraph(d.n_labels(), std::move(edges));
  return CoOccurrenceGraph(d.n_labels(), std::move(edges), std::move(weights));
}

inline CoOccurrenceGraph build_graph(const MultiLabelDataset& d, bool weighted) {
  std::vector<std::size_t> all(d.n_samples());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_graph(d, weighted, all);
}

/// Assignment of every vertex to a community.
struct Partition {
  std::vector<std::size_t> community_of;

  /// Relabels communities densely in order of first appearance by vertex.
  static Partition normalized(std::span<const std::size_t> ids) {
    std::map<std::size_t, std::size_t> remap;
    Partition p;
    for (auto id : ids) {
      auto [it, fresh] = remap.emplace(id, remap.size());
      p.community_of.push_back(it->second);
    }
    return p;
  }

  std::size_t n_communities() const {
    if (community_of.empty()) return 0;
    return *std::max_element(community_of.begin(), community_of.end()) + 1;
  }

  /// Communities as sorted vertex lists, ordered by their smallest vertex.
  std::vector<std::vector<LabelIndex>> communities() const {
    const auto dense = normalized(community_of);
    std::vector<std::vector<LabelIndex>> out(dense.n_communities());
    for (std::size_t v = 0; v < dense.community_of.size(); ++v)
      out[dense.community_of[v]].push_back(static_cast<LabelIndex>(v));
    return out;
  }

  /// Equality as a set of vertex sets, ignoring community ids.
  bool same_grouping(const Partition& other) const { return communities() == other.communities(); }

  bool operator==(const Partition&) const = default;
};

inline nlohmann::ordered_json partition_to_json(const Partition& p) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& c : p.communities()) out.push_back(c);
  return out;
}

inline Partition partition_from_json(const nlohmann::json& j, std::size_t n_vertices) {
  if (!j.is_array()) throw InputError("partition must be a JSON list of lists");
  std::vector<std::size_t> ids(n_vertices, SIZE_MAX);
  std::size_t c = 0;
  for (const auto& community : j) {
    if (!community.is_array()) throw InputError("partition must be a JSON list of lists");
    for (const auto& v : community) {
      const auto vertex = v.get<std::size_t>();
      if (vertex >= n_vertices || ids[vertex] != SIZE_MAX)
        throw InputError("partition lists vertex " + std::to_string(vertex) + " twice or out of range");
      ids[vertex] = c;
    }
    ++c;
  }
  if (std::find(ids.begin(), ids.end(), SIZE_MAX) != ids.end())
    throw InputError("partition does not cover every vertex");
  return Partition::normalized(ids);
}

/// Weighted Newman-Girvan modularity:
///   Q = sum_c [ w_in(c) / W - (s(c) / 2W)^2 ]
/// with W the total edge weight, w_in(c) the weight inside c and s(c) the
/// summed vertex strength of c. Edge counts and degrees when unweighted.
inline double modularity(const CoOccurrenceGraph& g, const Partition& p) {
  if (p.community_of.size() != g.n_vertices())
    throw InputError("partition covers " + std::to_string(p.community_of.size()) +
                     " vertices, graph has " + std::to_string(g.n_vertices()));
  const auto total = static_cast<double>(g.total_weight());
  if (total <= 0.0) throw InputError("modularity is undefined for a graph without edges");

  const auto dense = Partition::normalized(p.community_of);
  std::vector<double> inside(dense.n_communities(), 0.0);
  std::vector<double> strength(dense.n_communities(), 0.0);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto ca = dense.community_of[g.edges()[e].lo];
    const auto cb = dense.community_of[g.edges()[e].hi];
    const auto w = static_cast<double>(g.weight(e));
    if (ca == cb) inside[ca] += w;
    strength[ca] += w;
    strength[cb] += w;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    const double share = strength[c] / (2.0 * total);
    q += inside[c] / total - share * share;
  }
  return q;
}

struct CommunityDetection {
  Partition partition;
  double modularity = 0.0;
};

/// Agglomerative fast-greedy modularity maximization.
///
/// Starts from singletons and repeatedly merges the connected pair of
/// communities whose merge raises Q the most, stopping when no merge raises
/// it. Gains are compared exactly as integers,
///   dQ * 2W^2 = 2W * w_between - s_a * s_b,
/// and equal gains go to the pair with the smallest (min id, max id), where a
/// community's id is its smallest vertex.
inline CommunityDetection fastgreedy_communities(const CoOccurrenceGraph& g) {
  const std::size_t n = g.n_vertices();
  const auto total = static_cast<std::int64_t>(g.total_weight());
  if (total == 0) throw InputError("fast greedy needs a graph with at least one edge");

  // between[a][b]: weight of edges joining communities a and b (a != b).
  std::vector<std::vector<std::int64_t>> between(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto [lo, hi] = g.edges()[e];
    between[lo][hi] += static_cast<std::int64_t>(g.weight(e));
    between[hi][lo] += static_cast<std::int64_t>(g.weight(e));
  }
  std::vector<std::int64_t> strength(n);
  {
    const auto s = g.strengths();
    for (std::size_t v = 0; v < n; ++v) strength[v] = static_cast<std::int64_t>(s[v]);
  }
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> owner(n);
  std::iota(owner.begin(), owner.end(), std::size_t{0});

  for (;;) {
    bool found = false;
    std::size_t best_a = 0, best_b = 0;
    __int128 best_gain = 0;
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!alive[b] || between[a][b] == 0) continue;
        const __int128 gain = static_cast<__int128>(2 * total) * between[a][b] -
                              static_cast<__int128>(strength[a]) * strength[b];
        if (gain > 0 && (!found || gain > best_gain)) {
          found = true;
          best_gain = gain;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (!found) break;

    // Fold best_b into best_a; best_a < best_b keeps ids equal to the smallest vertex.
    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c] || c == best_a || c == best_b) continue;
      between[best_a][c] += between[best_b][c];
      between[c][best_a] = between[best_a][c];
      between[best_b][c] = between[c][best_b] = 0;
    }
    between[best_a][best_b] = between[best_b][best_a] = 0;
    strength[best_a] += strength[best_b];
    alive[best_b] = false;
    for (auto& o : owner)
      if (o == best_b) o = best_a;
  }

  CommunityDetection out;
  out.partition = Partition::normalized(owner);
  out.modularity = modularity(g, out.partition);
  return out;
}

/// Fast greedy, or all-singletons with Q = 0 when the graph has no edges.
inline CommunityDetection detect_communities(const CoOccurrenceGraph& g) {
  if (g.total_weight() == 0) {
    std::vector<std::size_t> ids(g.n_vertices());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return {Partition::normalized(ids), 0.0};
  }
  return fastgreedy_communities(g);
}

}  // namespace mlstrat
