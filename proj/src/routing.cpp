#include "f2f/routing.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "f2f/error.hpp"

namespace f2f {

namespace {

std::string lowered(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != '-' && c != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return t;
}

}  // namespace

const char* addressing_name(Addressing a) {
  switch (a) {
    case Addressing::kCoordinate: return "coordinate";
    case Addressing::kReturnAddress: return "rp";
    case Addressing::kPpp: return "ppp";
  }
  return "?";
}

Addressing parse_addressing(const std::string& text) {
  const std::string t = lowered(text);
  if (t == "coordinate" || t == "coord") return Addressing::kCoordinate;
  if (t == "rp" || t == "rpaddress" || t == "returnaddress") return Addressing::kReturnAddress;
  if (t == "ppp" || t == "pppaddress") return Addressing::kPpp;
  throw Error(ErrorCode::kParse, "unknown addressing '" + text + "'");
}

const char* choice_name(EmbeddingChoice c) {
  return c == EmbeddingChoice::kRandomTau ? "random-tau" : "min-neighbor-distance";
}

EmbeddingChoice parse_choice(const std::string& text) {
  const std::string t = lowered(text);
  if (t == "randomtau" || t == "random") return EmbeddingChoice::kRandomTau;
  if (t == "minneighbordistance" || t == "min") return EmbeddingChoice::kMinNeighborDistance;
  throw Error(ErrorCode::kParse, "unknown embedding choice '" + text + "'");
}

const char* failure_reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::kNone: return "none";
    case FailureReason::kNoProgress: return "no-progress";
    case FailureReason::kDroppedByAdversary: return "dropped-by-adversary";
    case FailureReason::kHopCap: return "hop-cap";
  }
  return "?";
}

RouteTarget RouteTarget::coordinate(NodeId dest, std::size_t tree, Coordinate c) {
  RouteTarget t;
  t.destination = dest;
  t.tree = tree;
  t.kind = Addressing::kCoordinate;
  t.coord = std::move(c);
  return t;
}

RouteTarget RouteTarget::address(NodeId dest, ReturnAddress a) {
  RouteTarget t;
  t.destination = dest;
  t.tree = static_cast<std::size_t>(a.tree);
  t.kind = Addressing::kReturnAddress;
  t.rp = std::move(a);
  return t;
}

RouteTarget RouteTarget::encrypted(NodeId dest, PppAddress a, const KeyRing& keys, const BlockCipher& cipher) {
  RouteTarget t;
  t.destination = dest;
  t.tree = static_cast<std::size_t>(a.tree);
  t.kind = Addressing::kPpp;
  t.ppp = std::move(a);
  t.keys = &keys;
  t.cipher = &cipher;
  return t;
}

DistanceKey target_distance(const RouteTarget& t, NodeId evaluator, NodeId v, const Embedding& emb, Metric m,
                            const EmbeddingConfig& cfg) {
  const Coordinate& c = emb.coords[t.tree][v];
  switch (t.kind) {
    case Addressing::kCoordinate: return distance_key(m, c, t.coord, cfg.cpl_constant);
    case Addressing::kReturnAddress: return diversity_rp(t.rp, c, m, cfg);
    case Addressing::kPpp: return diversity_ppp(t.ppp, c, (*t.keys)[evaluator], m, *t.cipher, cfg);
  }
  return {};
}

namespace {

struct HopState {
  std::vector<NodeId> sent;  // S(msg)
  NodeId pred = kNoNode;
};

bool contains(const std::vector<NodeId>& v, NodeId x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

RouteOutcome route(const Graph& g, const Embedding& emb, NodeId src, const RouteTarget& target,
                   const RoutingConfig& cfg, const LiveMask& live, std::mt19937_64& rng) {
  if (src >= g.node_count()) throw Error(ErrorCode::kDomain, "source out of range");
  if (target.tree >= emb.coords.size()) throw Error(ErrorCode::kDomain, "target tree out of range");
  const std::size_t cap = cfg.max_hops ? cfg.max_hops : std::max(4 * g.node_count(), 2 * g.edge_count());
  RouteOutcome out;
  std::unordered_map<NodeId, HopState> state;
  std::vector<NodeId> stack{src};  // current source-to-node path
  NodeId u = src, from = kNoNode;
  out.path.push_back(src);
  std::vector<NodeId> closest;

  for (;;) {
    if (u == target.destination) {
      out.success = true;
      out.path_length = stack.size() - 1;
      return out;
    }
    HopState& st = state[u];
    if (from != kNoNode && !contains(st.sent, from)) st.pred = from;
    const DistanceKey here = target_distance(target, u, u, emb, cfg.metric, cfg.embedding);

    bool moved = false;
    while (!moved) {
      closest.clear();
      DistanceKey best{};
      for (NodeId v : g.neighbors(u)) {
        if (!live.alive(v) || contains(st.sent, v)) continue;
        DistanceKey k = target_distance(target, u, v, emb, cfg.metric, cfg.embedding);
        if (closest.empty() || k < best) {
          best = k;
          closest.assign(1, v);
        } else if (k == best) {
          closest.push_back(v);
        }
      }
      if (!closest.empty() && best < here) {
        NodeId next = closest[std::uniform_int_distribution<std::size_t>(0, closest.size() - 1)(rng)];
        st.sent.push_back(next);
        ++out.hops;
        if (next == live.attacker) {
          out.dropped = true;
          if (!cfg.backtracking) {
            out.failure_reason = FailureReason::kDroppedByAdversary;
            return out;
          }
        } else {
          from = u;
          u = next;
          stack.push_back(u);
          out.path.push_back(u);
          moved = true;
        }
      } else if (cfg.backtracking && st.pred != kNoNode) {
        ++out.hops;
        from = u;
        u = st.pred;
        while (!stack.empty() && stack.back() != u) stack.pop_back();
        out.path.push_back(u);
        moved = true;
      } else {
        out.failure_reason = out.dropped ? FailureReason::kDroppedByAdversary : FailureReason::kNoProgress;
        return out;
      }
      if (out.hops > cap) {
        out.failure_reason = FailureReason::kHopCap;
        return out;
      }
    }
  }
}

RouteOutcome greedy_route(const Graph& g, const Embedding& emb, NodeId src, const RouteTarget& target,
                          const RoutingConfig& cfg, const LiveMask& live, std::mt19937_64& rng) {
  RoutingConfig c = cfg;
  c.backtracking = false;
  return route(g, emb, src, target, c, live, rng);
}

MultiRouteOutcome route_multi(const Graph& g, const Embedding& emb, NodeId src, const std::vector<RouteTarget>& targets,
                              const RoutingConfig& cfg, const LiveMask& live, std::uint64_t seed) {
  if (cfg.tau < 1 || static_cast<std::size_t>(cfg.tau) > targets.size())
    throw Error(ErrorCode::kValidation, "tau must be between 1 and the number of targets");
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  if (cfg.choice == EmbeddingChoice::kRandomTau) {
    std::mt19937_64 rng(mix_seed(seed, 0x746175ULL));
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    std::vector<Rational> best(targets.size(), Rational{std::numeric_limits<std::int64_t>::max() / 4, 1});
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (NodeId v : g.neighbors(src)) {
        if (!live.alive(v)) continue;
        Rational r = key_value(cfg.metric, target_distance(targets[i], src, v, emb, cfg.metric, cfg.embedding),
                               cfg.embedding.cpl_constant);
        if (r < best[i]) best[i] = r;
      }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return best[a] < best[b]; });
  }
  MultiRouteOutcome out;
  for (int k = 0; k < cfg.tau; ++k) {
    const std::size_t i = order[k];
    std::mt19937_64 rng(mix_seed(seed, targets[i].tree + 1));
    RouteOutcome r = route(g, emb, src, targets[i], cfg, live, rng);
    out.hops += r.hops;
    if (r.success) {
      out.success = true;
      if (!out.best_hops || r.hops < *out.best_hops) out.best_hops = r.hops;
      if (!out.best_path_length || r.path_length < *out.best_path_length) out.best_path_length = r.path_length;
    }
    out.trees_used.push_back(i);
    out.attempts.push_back(std::move(r));
  }
  return out;
}

bool greedy_path_exists(const Graph& g, const Embedding& emb, NodeId src, const RouteTarget& target, Metric m,
                        const EmbeddingConfig& cfg, const LiveMask& live) {
  const std::size_t n = g.node_count();
  if (n > 1000) throw Error(ErrorCode::kInvalidInput, "greedy path oracle is limited to 1000 nodes");
  if (src == target.destination) return true;
  if (!live.responsive(target.destination)) return false;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{src};
  seen[src] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (u == target.destination) return true;
    const DistanceKey here = target_distance(target, u, u, emb, m, cfg);
    for (NodeId v : g.neighbors(u)) {
      if (seen[v] || !live.responsive(v)) continue;
      if (target_distance(target, u, v, emb, m, cfg) < here) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace f2f
