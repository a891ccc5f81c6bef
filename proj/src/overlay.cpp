#include "f2f/overlay.hpp"

#include <algorithm>
#include <unordered_set>

#include "f2f/error.hpp"

namespace f2f {

KadId KadId::random(std::mt19937_64& rng) {
  KadId id;
  for (std::size_t i = 0; i < id.bytes.size(); i += 4) {
    auto r = static_cast<std::uint32_t>(rng());
    for (std::size_t j = 0; j < 4; ++j) id.bytes[i + j] = static_cast<std::uint8_t>(r >> (8 * j));
  }
  return id;
}

KadId KadId::from_hex(const std::string& text) {
  if (text.size() != 40) throw Error(ErrorCode::kParse, "a 160-bit id needs 40 hex digits");
  KadId id;
  for (std::size_t i = 0; i < 20; ++i) {
    auto nib = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw Error(ErrorCode::kParse, "bad hex digit in id");
    };
    id.bytes[i] = static_cast<std::uint8_t>(nib(text[2 * i]) << 4 | nib(text[2 * i + 1]));
  }
  return id;
}

std::string KadId::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

KadId operator^(const KadId& a, const KadId& b) {
  KadId r;
  for (std::size_t i = 0; i < r.bytes.size(); ++i) r.bytes[i] = a.bytes[i] ^ b.bytes[i];
  return r;
}

int kad_cpl(const KadId& a, const KadId& b) {
  for (std::size_t i = 0; i < a.bytes.size(); ++i) {
    const std::uint8_t x = a.bytes[i] ^ b.bytes[i];
    if (x) return static_cast<int>(i * 8) + __builtin_clz(static_cast<unsigned>(x)) - 24;
  }
  return 160;
}

bool xor_closer(const KadId& a, const KadId& b, const KadId& key) { return (a ^ key) < (b ^ key); }

void DhtConfig::validate() const {
  if (bucket_size < 1) throw Error(ErrorCode::kValidation, "bucket size must be >= 1");
  if (alpha < 1) throw Error(ErrorCode::kValidation, "alpha must be >= 1");
  if (replication < 1) throw Error(ErrorCode::kValidation, "replication must be >= 1");
}

namespace {

// Id with the first `len` bits of `p`, then `fill` in every remaining bit.
KadId with_prefix(const KadId& p, int len, bool fill) {
  KadId r = p;
  for (int i = len; i < 160; ++i) {
    auto& byte = r.bytes[i / 8];
    const std::uint8_t m = static_cast<std::uint8_t>(0x80U >> (i % 8));
    byte = fill ? (byte | m) : static_cast<std::uint8_t>(byte & ~m);
  }
  return r;
}

KadId flip_bit(KadId id, int i) {
  id.bytes[i / 8] ^= static_cast<std::uint8_t>(0x80U >> (i % 8));
  return id;
}

}  // namespace

Overlay build_overlay(std::size_t n, const DhtConfig& cfg, std::uint64_t seed, const std::vector<char>& participants) {
  cfg.validate();
  Overlay ov;
  ov.config = cfg;
  ov.nodes.resize(n);
  ov.epoch.assign(n, 0);
  ov.departed.assign(n, 0);
  std::mt19937_64 rng(mix_seed(seed, 0x6b6164ULL));
  for (auto& node : ov.nodes) node.id = KadId::random(rng);

  std::vector<std::pair<KadId, NodeId>> sorted;
  for (NodeId v = 0; v < n; ++v)
    if (participants.empty() || participants[v]) sorted.emplace_back(ov.nodes[v].id, v);
  std::sort(sorted.begin(), sorted.end());
  auto range = [&](const KadId& lo, const KadId& hi) {
    auto first = std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(lo, NodeId{0}));
    auto last = std::upper_bound(sorted.begin(), sorted.end(), std::make_pair(hi, kNoNode));
    return std::make_pair(first, last);
  };

  std::vector<std::size_t> pick;
  for (NodeId u = 0; u < n; ++u) {
    if (!participants.empty() && !participants[u]) continue;
    const KadId& me = ov.nodes[u].id;
    for (int j = 0; j < 160; ++j) {
      const KadId other = flip_bit(me, j);
      auto [first, last] = range(with_prefix(other, j + 1, false), with_prefix(other, j + 1, true));
      const std::size_t count = static_cast<std::size_t>(last - first);
      if (count > 0) {
        auto& bucket = ov.nodes[u].buckets;
        if (bucket.size() <= static_cast<std::size_t>(j)) bucket.resize(j + 1);
        pick.resize(count);
        for (std::size_t i = 0; i < count; ++i) pick[i] = i;
        const std::size_t take = std::min<std::size_t>(count, static_cast<std::size_t>(cfg.bucket_size));
        for (std::size_t i = 0; i < take; ++i) {
          std::size_t r = std::uniform_int_distribution<std::size_t>(i, count - 1)(rng);
          std::swap(pick[i], pick[r]);
          const auto& [id, v] = *(first + static_cast<std::ptrdiff_t>(pick[i]));
          bucket[j].push_back(DhtEntry{v, id, 0});
        }
      }
      // stop once nobody else shares the first j+1 bits
      auto [f2, l2] = range(with_prefix(me, j + 1, false), with_prefix(me, j + 1, true));
      if (l2 - f2 <= 1) break;
    }
  }
  return ov;
}

std::vector<NodeId> closest_nodes(const Overlay& ov, const KadId& key, int count, const LiveMask& live) {
  std::vector<NodeId> cands;
  for (NodeId v = 0; v < ov.nodes.size(); ++v)
    if (live.responsive(v) && !ov.departed[v]) cands.push_back(v);
  const auto take = std::min<std::size_t>(cands.size(), static_cast<std::size_t>(count));
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(),
                    [&](NodeId a, NodeId b) { return xor_closer(ov.nodes[a].id, ov.nodes[b].id, key); });
  cands.resize(take);
  return cands;
}

LookupOutcome dht_lookup(const Graph& g, const Embedding& emb, const Overlay& ov, const KadId& key, NodeId origin,
                         const RoutingConfig& rcfg, const LiveMask& live, std::uint64_t seed) {
  if (origin >= ov.nodes.size() || !live.alive(origin)) throw Error(ErrorCode::kDomain, "lookup origin is not live");
  LookupOutcome out;
  const auto targets = closest_nodes(ov, key, ov.config.replication, live);
  auto is_target = [&](NodeId v) { return std::find(targets.begin(), targets.end(), v) != targets.end(); };
  if (is_target(origin)) {
    out.success = true;
    out.terminals.push_back(origin);
    out.walks.push_back({origin});
    return out;
  }
  std::unordered_set<NodeId> visited{origin};
  std::uint64_t contact_no = 0;
  std::vector<RouteTarget> route_targets;
  std::vector<const DhtEntry*> cands;

  for (int walk = 0; walk < ov.config.alpha; ++walk) {
    NodeId cur = origin;
    std::vector<std::pair<NodeId, std::size_t>> back;  // predecessor and the cost of reaching it again
    std::vector<NodeId> path{origin};
    for (;;) {
      if (is_target(cur)) {
        out.success = true;
        break;
      }
      const KadId& here = ov.nodes[cur].id;
      cands.clear();
      bool any_closer = false;
      for (const auto& bucket : ov.nodes[cur].buckets)
        for (const auto& e : bucket) {
          if (!xor_closer(e.id, here, key)) continue;
          any_closer = true;
          if (!visited.count(e.node)) cands.push_back(&e);
        }
      std::sort(cands.begin(), cands.end(),
                [&](const DhtEntry* a, const DhtEntry* b) { return xor_closer(a->id, b->id, key); });
      bool moved = false;
      for (const DhtEntry* e : cands) {
        const NodeId v = e->node;
        visited.insert(v);
        route_targets.clear();
        for (std::size_t i = 0; i < emb.coords.size(); ++i)
          route_targets.push_back(RouteTarget::coordinate(v, i, emb.coords[i][v]));
        MultiRouteOutcome r = route_multi(g, emb, cur, route_targets, rcfg, live, mix_seed(seed, contact_no++));
        const bool ok = r.success && !ov.departed[v];
        const std::size_t cost = r.success ? *r.best_hops : r.hops;
        out.underlay_hops += cost;
        out.contacts.push_back({cur, v, ok});
        if (!ok) continue;
        back.emplace_back(cur, cost);
        cur = v;
        path.push_back(v);
        ++out.overlay_hops;
        moved = true;
        break;
      }
      if (moved) continue;
      if (!any_closer || back.empty()) break;
      out.underlay_hops += back.back().second;
      cur = back.back().first;
      back.pop_back();
      path.push_back(cur);
    }
    out.terminals.push_back(cur);
    out.walks.push_back(std::move(path));
    if (out.success) break;
  }
  return out;
}

std::size_t apply_lookup_feedback(Overlay& ov, const LookupOutcome& out, const LiveMask& live) {
  std::size_t evicted = 0;
  for (const auto& c : out.contacts) {
    auto& buckets = ov.nodes[c.from].buckets;
    const bool gone = !live.alive(c.to) || ov.departed[c.to];
    for (auto& bucket : buckets) {
      for (auto it = bucket.begin(); it != bucket.end();) {
        if (it->node != c.to) {
          ++it;
          continue;
        }
        if (c.ok) {
          it->address_epoch = ov.epoch[c.to];
          ++it;
        } else if (gone) {
          it = bucket.erase(it);
          ++evicted;
        } else {
          ++it;
        }
      }
    }
  }
  return evicted;
}

void overlay_stabilize(Overlay& ov, NodeId departed) {
  if (departed >= ov.nodes.size()) throw Error(ErrorCode::kDomain, "node out of range");
  ov.departed[departed] = 1;
}

void overlay_note_coordinate_change(Overlay& ov, NodeId node) {
  if (node >= ov.nodes.size()) throw Error(ErrorCode::kDomain, "node out of range");
  ++ov.epoch[node];
}

}  // namespace f2f
