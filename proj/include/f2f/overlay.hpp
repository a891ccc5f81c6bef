#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "f2f/routing.hpp"

namespace f2f {

/// 160-bit identifier, most significant byte first.
struct KadId {
  std::array<std::uint8_t, 20> bytes{};

  static KadId random(std::mt19937_64& rng);
  static KadId from_hex(const std::string& text);
  std::string hex() const;

  friend KadId operator^(const KadId& a, const KadId& b);
  friend auto operator<=>(const KadId&, const KadId&) = default;
  bool bit(int i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1U; }
};

/// Number of leading bits a and b share (160 when equal).
int kad_cpl(const KadId& a, const KadId& b);
/// True iff a is strictly closer to key than b in the XOR metric.
bool xor_closer(const KadId& a, const KadId& b, const KadId& key);

struct DhtConfig {
  int bucket_size = 8;  // k
  int alpha = 1;
  int replication = 1;

  void validate() const;
};

/// Table entries refer to a node by handle; the epoch records which version
/// of its return addresses the holder last saw.
struct DhtEntry {
  NodeId node = kNoNode;
  KadId id;
  std::uint32_t address_epoch = 0;
};

struct DhtNode {
  KadId id;
  std::vector<std::vector<DhtEntry>> buckets;  // bucket j: entries sharing exactly j leading bits
};

struct Overlay {
  std::vector<DhtNode> nodes;
  std::vector<std::uint32_t> epoch;  // current address version of each node
  std::vector<char> departed;
  DhtConfig config;
};

/// Assigns random ids and fills every bucket with up to k nodes drawn
/// uniformly from all nodes that belong in it. Nodes with participants[v] == 0
/// get an id but no table and are never listed.
Overlay build_overlay(std::size_t n, const DhtConfig& cfg, std::uint64_t seed, const std::vector<char>& participants = {});

struct ContactRecord {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  bool ok = false;
};

struct LookupOutcome {
  bool success = false;
  std::size_t underlay_hops = 0;
  std::size_t overlay_hops = 0;        // successful overlay forwards
  std::vector<NodeId> terminals;       // last node of each walk
  std::vector<std::vector<NodeId>> walks;
  std::vector<ContactRecord> contacts;
};

/// The `replication` live, responsive nodes closest to key (closest first).
std::vector<NodeId> closest_nodes(const Overlay& ov, const KadId& key, int count, const LiveMask& live);

/// Recursive lookup with alpha walks that share one visited set. Each overlay
/// hop is a multi-embedding route; a failed contact is replaced by the next
/// closer entry, and a node without any working closer entry hands the
/// request back to its predecessor.
LookupOutcome dht_lookup(const Graph& g, const Embedding& emb, const Overlay& ov, const KadId& key, NodeId origin,
                         const RoutingConfig& rcfg, const LiveMask& live, std::uint64_t seed);

/// Lazily evicts entries whose contact failed because the node is gone and
/// refreshes the epoch of entries that answered.
std::size_t apply_lookup_feedback(Overlay& ov, const LookupOutcome& out, const LiveMask& live);

/// Marks a node as departed; tables are repaired lazily by lookups.
void overlay_stabilize(Overlay& ov, NodeId departed);

/// Records that a node's coordinates (and so its return addresses) changed.
void overlay_note_coordinate_change(Overlay& ov, NodeId node);

}  // namespace f2f
