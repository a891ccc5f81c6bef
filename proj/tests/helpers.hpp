#pragma once

#include <random>
#include <utility>
#include <vector>

#include "f2f/graph.hpp"
#include "f2f/word.hpp"

namespace testutil {

using f2f::Graph;
using f2f::NodeId;

inline Graph path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return Graph::from_edges(n, e);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

// random spanning tree plus `extra` chords; always connected
inline Graph random_connected(std::size_t n, std::size_t extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 1; v < n; ++v) e.emplace_back(v, static_cast<NodeId>(rng() % v));
  for (std::size_t i = 0; i < extra; ++i) e.emplace_back(static_cast<NodeId>(rng() % n), static_cast<NodeId>(rng() % n));
  return Graph::from_edges(n, e);
}

}  // namespace testutil
