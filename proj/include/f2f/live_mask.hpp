#pragma once

#include <vector>

#include "f2f/graph.hpp"

namespace f2f {

/// Which nodes are up, and which single node (if any) is the attacker. The
/// attacker counts as live: it takes part in everything and then drops.
struct LiveMask {
  std::vector<char> live;
  NodeId attacker = kNoNode;

  static LiveMask all(std::size_t n) { return LiveMask{std::vector<char>(n, 1), kNoNode}; }

  bool alive(NodeId v) const { return live.empty() || live[v] != 0; }
  bool responsive(NodeId v) const { return alive(v) && v != attacker; }
};

}  // namespace f2f
