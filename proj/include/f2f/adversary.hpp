#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "f2f/embedding.hpp"
#include "f2f/live_mask.hpp"

namespace f2f {

enum class AdversaryMode { kNone, kRandomFailures, kAttRand, kAttRoot };

const char* adversary_mode_name(AdversaryMode m);
AdversaryMode parse_adversary_mode(const std::string& text);

struct AdversaryConfig {
  AdversaryMode mode = AdversaryMode::kNone;
  double failure_fraction = 0.0;    // applied in every mode, not just kRandomFailures
  std::size_t attacker_edges = 0;   // x
  std::uint64_t seed = 1;

  bool attacks() const { return mode == AdversaryMode::kAttRand || mode == AdversaryMode::kAttRoot; }
  void validate() const;
};

/// Random order in which honest nodes fail; prefixes give nested failure sets.
std::vector<NodeId> failure_order(std::size_t n, std::uint64_t seed, NodeId exclude = kNoNode);

/// Fails exactly floor(fraction * honest nodes) nodes, never `exclude`.
LiveMask inject_failures(const Graph& g, double fraction, std::uint64_t seed, NodeId exclude = kNoNode);

struct AttackedGraph {
  Graph graph;
  NodeId attacker = kNoNode;
};

/// Adds node n with edges to x distinct uniformly chosen nodes.
AttackedGraph attach_attacker(const Graph& g, std::size_t x, std::uint64_t seed);

/// The attacker is the root of every tree.
std::vector<NodeId> apply_att_root(int gamma, NodeId attacker);

/// Gives every child subtree of the attacker a fresh random prefix in place
/// of the attacker's own coordinate, independently per child and per tree.
void apply_att_rand(Embedding& emb, const TreeSet& ts, NodeId attacker, const EmbeddingConfig& cfg,
                    std::uint64_t seed);

}  // namespace f2f
