#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "f2f/graph.hpp"

namespace f2f {

enum class TreeStrategy { kDivRand, kDivDep, kBfs };
enum class RootPolicy { kRandom, kMaxDegree, kFixed };

const char* strategy_name(TreeStrategy s);
TreeStrategy parse_strategy(const std::string& text);

struct TreeConfig {
  int gamma = 1;
  double accept_prob = 0.5;
  TreeStrategy strategy = TreeStrategy::kDivRand;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Ties go to the lowest id for kMaxDegree.
NodeId elect_root(const Graph& g, RootPolicy policy, std::uint64_t seed, NodeId fixed = kNoNode);

struct Tree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;                  // kNoNode for the root and absent nodes
  std::vector<std::vector<NodeId>> children;
  std::vector<std::int32_t> level;             // -1 when the node is not in the tree
  std::vector<std::int32_t> join_round;

  bool contains(NodeId v) const { return level[v] >= 0; }
};

/// Number of trees in which neighbors(u)[k] is u's parent, stored at
/// g.slot_base(u) + k.
using ParentCounts = std::vector<std::uint16_t>;

struct TreeSet {
  std::vector<Tree> trees;
  ParentCounts pc;
  std::vector<char> member;  // nodes taking part in the trees
  TreeConfig config;

  std::size_t gamma() const { return trees.size(); }
};

struct Invitation {
  int tree;
  std::uint32_t slot;  // index of the inviter in neighbors(u)
};

/// Synchronous round-based construction. Roots join in round 0 and their
/// invitations are pending at the start of round 1.
class TreeBuilder {
 public:
  /// `mask` (optional) restricts the construction to nodes with mask[v] != 0.
  TreeBuilder(const Graph& g, const TreeConfig& cfg, const std::vector<NodeId>& roots, std::vector<char> mask = {});

  /// Runs one round; returns false once every tree spans every member.
  bool step();
  bool finished() const { return remaining_ == 0; }
  int round() const { return round_; }
  int round_cap() const { return round_cap_; }

  const std::vector<Invitation>& invitations(NodeId u) const { return pending_[u]; }
  const TreeSet& state() const { return ts_; }

  /// Steps until done; throws kConstruction past the round cap.
  TreeSet run();

 private:
  void join(NodeId u, int tree, std::uint32_t slot);
  void deliver(NodeId u, int tree);
  void bfs_tree(int tree);

  const Graph& g_;
  TreeSet ts_;
  std::mt19937_64 rng_;
  std::vector<std::vector<Invitation>> pending_;
  std::vector<std::pair<NodeId, int>> joined_this_round_;
  std::vector<NodeId> active_;
  std::size_t remaining_ = 0;
  int round_ = 0;
  int round_cap_ = 0;
};

TreeSet construct_trees(const Graph& g, const TreeConfig& cfg, const std::vector<NodeId>& roots,
                        std::vector<char> mask = {});

/// Adds a non-member node as a leaf in every tree by replaying the
/// invitation protocol over its neighbors' join rounds.
void handle_join(TreeSet& ts, const Graph& g, NodeId node, std::uint64_t seed);

struct DepartureResult {
  std::size_t reassigned = 0;  // descendants whose coordinates change, summed over trees
  std::size_t reparented = 0;  // nodes that picked a new parent
};

/// Removes `node` and repairs every tree locally. Throws kRootDeparture if the
/// node is a root in any tree; the caller must rebuild that tree.
DepartureResult handle_departure(TreeSet& ts, const Graph& g, NodeId node, std::uint64_t seed);

std::size_t descendants_count(const TreeSet& ts, NodeId node, int tree);

/// Lines "tree node parent level"; parent is -1 for roots.
std::string dump_trees(const TreeSet& ts);

/// Checks the structural invariants and throws kValidation on the first violation.
void validate_tree_set(const TreeSet& ts, const Graph& g);

}  // namespace f2f
