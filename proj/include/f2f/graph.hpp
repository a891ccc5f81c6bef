#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace f2f {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr std::int32_t kUnreachable = -1;

/// Undirected simple graph in compressed adjacency form. Neighbor lists are
/// sorted; the position of a neighbor inside `neighbors(u)` is its "slot",
/// which other modules use to index per-edge state.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on nodes [0, n). Self-loops are dropped, duplicates and
  /// reversed duplicates are merged.
  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  /// Offset of `u`'s first slot in a flat per-directed-edge array.
  std::size_t slot_base(NodeId u) const { return offsets_[u]; }
  std::size_t slot_count() const { return adjacency_.size(); }

  bool has_edge(NodeId u, NodeId v) const;
  /// Slot of `v` in `neighbors(u)`, or -1.
  std::int64_t slot_of(NodeId u, NodeId v) const;

  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<NodeId> adjacency_;
};

enum class SyntheticModel { kErdosRenyi, kPreferentialAttachment };

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t giant_component_size = 0;
  std::int32_t diameter_estimate = 0;
  double average_degree = 0.0;
};

/// Parses "u v" lines; '#' and '%' lines are comments, columns after the
/// second are ignored. Ids are remapped densely in increasing order.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);

/// Deterministic for a fixed seed; always returns a connected graph.
/// `param` is the edge probability (Erdos-Renyi) or the number of edges each
/// new node attaches with (preferential attachment).
Graph generate_synthetic(SyntheticModel model, std::size_t n, double param, std::uint64_t seed);

/// Component label per node, labels in [0, count). Nodes with `mask[v] == 0`
/// get label -1 and are treated as absent. An empty mask means all present.
struct Components {
  std::vector<std::int32_t> label;
  std::vector<std::size_t> size;
};
Components connected_components(const Graph& g, std::span<const char> mask = {});

/// Induced subgraph of the largest component. `original_ids`, if given,
/// receives the old id of every new node.
Graph giant_component(const Graph& g, std::vector<NodeId>* original_ids = nullptr);

bool is_connected(const Graph& g);

/// BFS hop distances; unreachable nodes hold kUnreachable. Nodes with
/// `mask[v] == 0` are skipped.
std::vector<std::int32_t> shortest_path_lengths(const Graph& g, NodeId source, std::span<const char> mask = {});

/// Diameter estimate is the double-sweep BFS lower bound on the giant component.
GraphStats compute_stats(const Graph& g);
std::string stats_csv_header();
std::string stats_csv_row(const GraphStats& s);

}  // namespace f2f
