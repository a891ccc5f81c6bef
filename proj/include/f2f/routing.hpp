#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "f2f/addresses.hpp"
#include "f2f/embedding.hpp"
#include "f2f/live_mask.hpp"

namespace f2f {

enum class Addressing { kCoordinate, kReturnAddress, kPpp };
enum class EmbeddingChoice { kRandomTau, kMinNeighborDistance };
enum class FailureReason { kNone, kNoProgress, kDroppedByAdversary, kHopCap };

const char* addressing_name(Addressing a);
Addressing parse_addressing(const std::string& text);
const char* choice_name(EmbeddingChoice c);
EmbeddingChoice parse_choice(const std::string& text);
const char* failure_reason_name(FailureReason r);

struct RoutingConfig {
  int tau = 1;
  Metric metric = Metric::kTd;
  Addressing addressing = Addressing::kCoordinate;
  bool backtracking = true;
  EmbeddingChoice choice = EmbeddingChoice::kRandomTau;
  std::size_t max_hops = 0;  // 0 selects max(4n, 2m)
  EmbeddingConfig embedding;
};

/// Where a message is going in one tree. The destination node id is only
/// used for the success check: the receiver recognises its own address.
struct RouteTarget {
  NodeId destination = kNoNode;
  std::size_t tree = 0;
  Addressing kind = Addressing::kCoordinate;
  Coordinate coord;
  ReturnAddress rp;
  PppAddress ppp;
  const KeyRing* keys = nullptr;  // per-node subtree keys of `tree`, for the encrypted form
  const BlockCipher* cipher = nullptr;

  static RouteTarget coordinate(NodeId dest, std::size_t tree, Coordinate c);
  static RouteTarget address(NodeId dest, ReturnAddress a);
  static RouteTarget encrypted(NodeId dest, PppAddress a, const KeyRing& keys, const BlockCipher& cipher);
};

/// Distance of `v`'s coordinate to the target as judged by `evaluator`.
DistanceKey target_distance(const RouteTarget& t, NodeId evaluator, NodeId v, const Embedding& emb, Metric m,
                            const EmbeddingConfig& cfg);

struct RouteOutcome {
  bool success = false;
  std::size_t hops = 0;         // messages sent, forwards plus backtracks plus dropped sends
  std::size_t path_length = 0;  // forward edges on the final source-destination path
  std::vector<NodeId> path;     // every node the message visited, in order
  FailureReason failure_reason = FailureReason::kNone;
  bool dropped = false;         // some send reached the attacker
};

/// Greedy routing in one embedding, with backtracking if cfg.backtracking.
RouteOutcome route(const Graph& g, const Embedding& emb, NodeId src, const RouteTarget& target,
                   const RoutingConfig& cfg, const LiveMask& live, std::mt19937_64& rng);

/// route() with backtracking switched off.
RouteOutcome greedy_route(const Graph& g, const Embedding& emb, NodeId src, const RouteTarget& target,
                          const RoutingConfig& cfg, const LiveMask& live, std::mt19937_64& rng);

struct MultiRouteOutcome {
  bool success = false;
  std::size_t hops = 0;                          // summed over attempts
  std::optional<std::size_t> best_hops;          // fewest hops among successful attempts
  std::optional<std::size_t> best_path_length;
  std::vector<std::size_t> trees_used;
  std::vector<RouteOutcome> attempts;
};

/// Picks cfg.tau of the given per-tree targets and routes in each
/// independently. Selections for increasing tau are nested.
MultiRouteOutcome route_multi(const Graph& g, const Embedding& emb, NodeId src, const std::vector<RouteTarget>& targets,
                              const RoutingConfig& cfg, const LiveMask& live, std::uint64_t seed);

/// True iff some path over responsive nodes strictly decreases the distance
/// to the target at every step. Refuses graphs above 1000 nodes.
bool greedy_path_exists(const Graph& g, const Embedding& emb, NodeId src, const RouteTarget& target, Metric m,
                        const EmbeddingConfig& cfg, const LiveMask& live);

}  // namespace f2f
