#include "f2f/trees.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "f2f/error.hpp"
#include "f2f/word.hpp"

namespace f2f {

const char* strategy_name(TreeStrategy s) {
  switch (s) {
    case TreeStrategy::kDivRand: return "div-rand";
    case TreeStrategy::kDivDep: return "div-dep";
    case TreeStrategy::kBfs: return "bfs";
  }
  return "?";
}

TreeStrategy parse_strategy(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != '-' && c != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "divrand" || t == "rand") return TreeStrategy::kDivRand;
  if (t == "divdep" || t == "dep") return TreeStrategy::kDivDep;
  if (t == "bfs") return TreeStrategy::kBfs;
  throw Error(ErrorCode::kParse, "unknown tree strategy '" + text + "'");
}

void TreeConfig::validate() const {
  if (gamma < 1) throw Error(ErrorCode::kValidation, "gamma must be >= 1");
  if (!(accept_prob > 0.0 && accept_prob <= 1.0)) throw Error(ErrorCode::kValidation, "q must be in (0,1]");
}

NodeId elect_root(const Graph& g, RootPolicy policy, std::uint64_t seed, NodeId fixed) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "cannot elect a root in an empty graph");
  switch (policy) {
    case RootPolicy::kFixed:
      if (fixed >= n) throw Error(ErrorCode::kDomain, "fixed root " + std::to_string(fixed) + " out of range");
      return fixed;
    case RootPolicy::kMaxDegree: {
      NodeId best = 0;
      for (NodeId v = 1; v < n; ++v)
        if (g.degree(v) > g.degree(best)) best = v;
      return best;
    }
    case RootPolicy::kRandom: {
      std::mt19937_64 rng(mix_seed(seed, 0x726f6f74));
      return static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    }
  }
  return 0;
}

namespace {

bool in_mask(const std::vector<char>& m, NodeId v) { return m[v] != 0; }

template <typename T>
const T& pick_uniform(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// Restricts `cands` to the inviters at the lowest level, for the depth-aware strategy.
void keep_lowest_level(std::vector<Invitation>& cands, const TreeSet& ts, const Graph& g, NodeId u) {
  auto nb = g.neighbors(u);
  std::int32_t best = std::numeric_limits<std::int32_t>::max();
  for (const auto& c : cands) best = std::min(best, ts.trees[c.tree].level[nb[c.slot]]);
  std::erase_if(cands, [&](const Invitation& c) { return ts.trees[c.tree].level[nb[c.slot]] != best; });
}

// One decision of the invitation protocol for node u. `pc_of(slot)` reads
// u's parent counts; `min_all` is the minimum over all member neighbors.
template <typename PcOf>
std::optional<Invitation> decide(const std::vector<Invitation>& inv, PcOf pc_of, int min_all, const TreeSet& ts,
                                 const Graph& g, NodeId u, std::mt19937_64& rng) {
  if (inv.empty()) return std::nullopt;
  std::vector<Invitation> cands;
  for (const auto& i : inv)
    if (pc_of(i.slot) == min_all) cands.push_back(i);
  if (cands.empty()) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) > ts.config.accept_prob) return std::nullopt;
    int best = std::numeric_limits<int>::max();
    for (const auto& i : inv) best = std::min(best, static_cast<int>(pc_of(i.slot)));
    for (const auto& i : inv)
      if (pc_of(i.slot) == best) cands.push_back(i);
  }
  if (ts.config.strategy == TreeStrategy::kDivDep) keep_lowest_level(cands, ts, g, u);
  return pick_uniform(cands, rng);
}

int round_cap_for(const Graph& g, const TreeConfig& cfg, const std::vector<NodeId>& roots,
                  const std::vector<char>& mask) {
  std::int32_t ecc = 1;
  std::vector<NodeId> distinct = roots;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (NodeId r : distinct) {
    auto d = shortest_path_lengths(g, r, mask);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (!mask[v]) continue;
      if (d[v] == kUnreachable)
        throw Error(ErrorCode::kConstruction, "graph is disconnected; node " + std::to_string(v) +
                                                  " cannot reach root " + std::to_string(r));
      ecc = std::max(ecc, d[v]);
    }
  }
  const double cap = std::ceil(50.0 * cfg.gamma / cfg.accept_prob * ecc);
  return static_cast<int>(std::min(cap, 1e9));
}

Tree empty_tree(std::size_t n) {
  Tree t;
  t.parent.assign(n, kNoNode);
  t.children.assign(n, {});
  t.level.assign(n, -1);
  t.join_round.assign(n, -1);
  return t;
}

}  // namespace

TreeBuilder::TreeBuilder(const Graph& g, const TreeConfig& cfg, const std::vector<NodeId>& roots,
                         std::vector<char> mask)
    : g_(g), rng_(mix_seed(cfg.rng_seed, 0x7472656573)) {
  cfg.validate();
  const std::size_t n = g.node_count();
  if (roots.size() != static_cast<std::size_t>(cfg.gamma))
    throw Error(ErrorCode::kValidation, "expected one root per tree");
  if (mask.empty()) mask.assign(n, 1);
  if (mask.size() != n) throw Error(ErrorCode::kInvalidInput, "mask size does not match the graph");
  for (NodeId r : roots)
    if (r >= n || !mask[r]) throw Error(ErrorCode::kDomain, "root " + std::to_string(r) + " is not a member node");
  round_cap_ = round_cap_for(g, cfg, roots, mask);

  ts_.config = cfg;
  ts_.member = std::move(mask);
  ts_.pc.assign(g.slot_count(), 0);
  ts_.trees.assign(cfg.gamma, empty_tree(n));
  pending_.assign(n, {});
  std::size_t members = 0;
  for (NodeId v = 0; v < n; ++v) members += ts_.member[v] ? 1 : 0;
  remaining_ = members * cfg.gamma;

  for (int i = 0; i < cfg.gamma; ++i) {
    Tree& t = ts_.trees[i];
    t.root = roots[i];
    t.level[roots[i]] = 0;
    t.join_round[roots[i]] = 0;
    --remaining_;
  }
  if (cfg.strategy == TreeStrategy::kBfs) {
    for (int i = 0; i < cfg.gamma; ++i) bfs_tree(i);
    remaining_ = 0;
    return;
  }
  for (int i = 0; i < cfg.gamma; ++i) deliver(roots[i], i);
  for (NodeId v = 0; v < n; ++v)
    if (ts_.member[v]) active_.push_back(v);
}

void TreeBuilder::bfs_tree(int i) {
  Tree& t = ts_.trees[i];
  std::vector<NodeId> frontier{t.root}, next, inviters;
  std::int32_t d = 0;
  while (!frontier.empty()) {
    ++d;
    next.clear();
    for (NodeId u : frontier)
      for (NodeId v : g_.neighbors(u))
        if (in_mask(ts_.member, v) && t.level[v] < 0) {
          t.level[v] = d;  // provisional mark, parent chosen below
          next.push_back(v);
        }
    std::shuffle(next.begin(), next.end(), rng_);
    for (NodeId v : next) {
      inviters.clear();
      for (NodeId w : g_.neighbors(v))
        if (t.level[w] == d - 1 && in_mask(ts_.member, w)) inviters.push_back(w);
      NodeId p = pick_uniform(inviters, rng_);
      t.parent[v] = p;
      t.children[p].push_back(v);
      t.join_round[v] = d;
      ++ts_.pc[g_.slot_base(v) + g_.slot_of(v, p)];
    }
    frontier.swap(next);
  }
}

void TreeBuilder::deliver(NodeId u, int tree) {
  const Tree& t = ts_.trees[tree];
  for (NodeId v : g_.neighbors(u)) {
    if (!in_mask(ts_.member, v) || t.contains(v)) continue;
    pending_[v].push_back({tree, static_cast<std::uint32_t>(g_.slot_of(v, u))});
  }
}

void TreeBuilder::join(NodeId u, int tree, std::uint32_t slot) {
  Tree& t = ts_.trees[tree];
  const NodeId p = g_.neighbors(u)[slot];
  t.parent[u] = p;
  t.children[p].push_back(u);
  t.level[u] = t.level[p] + 1;
  t.join_round[u] = round_;
  ++ts_.pc[g_.slot_base(u) + slot];
  std::erase_if(pending_[u], [&](const Invitation& i) { return i.tree == tree; });
  joined_this_round_.emplace_back(u, tree);
  --remaining_;
}

bool TreeBuilder::step() {
  if (remaining_ == 0) return false;
  ++round_;
  joined_this_round_.clear();
  for (NodeId u : active_) {
    auto& inv = pending_[u];
    if (inv.empty()) continue;
    const std::size_t base = g_.slot_base(u);
    auto nb = g_.neighbors(u);
    int min_all = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (in_mask(ts_.member, nb[k])) min_all = std::min(min_all, static_cast<int>(ts_.pc[base + k]));
    auto pc_of = [&](std::uint32_t slot) { return static_cast<int>(ts_.pc[base + slot]); };
    if (auto choice = decide(inv, pc_of, min_all, ts_, g_, u, rng_)) join(u, choice->tree, choice->slot);
  }
  for (auto [u, tree] : joined_this_round_) deliver(u, tree);
  std::erase_if(active_, [&](NodeId u) {
    for (const auto& t : ts_.trees)
      if (!t.contains(u)) return false;
    return true;
  });
  return remaining_ != 0;
}

TreeSet TreeBuilder::run() {
  while (step()) {
    if (round_ >= round_cap_)
      throw Error(ErrorCode::kConstruction, "tree construction exceeded the round cap of " + std::to_string(round_cap_));
  }
  return ts_;
}

TreeSet construct_trees(const Graph& g, const TreeConfig& cfg, const std::vector<NodeId>& roots,
                        std::vector<char> mask) {
  TreeBuilder b(g, cfg, roots, std::move(mask));
  return b.run();
}

void handle_join(TreeSet& ts, const Graph& g, NodeId u, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (u >= n) throw Error(ErrorCode::kDomain, "joining node out of range");
  if (ts.member.size() != n) throw Error(ErrorCode::kInvalidInput, "tree set does not match the graph");
  if (ts.member[u]) throw Error(ErrorCode::kJoin, "node " + std::to_string(u) + " is already a member");
  auto nb = g.neighbors(u);
  const int gamma = static_cast<int>(ts.gamma());

  // (available-from round, invitation) for every in-tree member neighbor
  std::vector<std::pair<int, Invitation>> offers;
  for (int i = 0; i < gamma; ++i) {
    bool any = false;
    for (std::uint32_t k = 0; k < nb.size(); ++k) {
      NodeId w = nb[k];
      if (!ts.member[w] || !ts.trees[i].contains(w)) continue;
      offers.push_back({ts.trees[i].join_round[w] + 1, Invitation{i, k}});
      any = true;
    }
    if (!any) throw Error(ErrorCode::kJoin, "node " + std::to_string(u) + " has no neighbor in tree " + std::to_string(i));
  }

  std::mt19937_64 rng(mix_seed(seed, u));
  std::vector<int> local_pc(nb.size(), 0);
  std::vector<int> joined_round(gamma, -1);
  std::vector<std::uint32_t> joined_slot(gamma, 0);
  int min_all = 0;  // u has no parents yet, and every member neighbor starts at 0
  int left = gamma;
  int max_avail = 0;
  for (const auto& o : offers) max_avail = std::max(max_avail, o.first);
  const long long cap = max_avail + static_cast<long long>(std::ceil(50.0 * gamma / ts.config.accept_prob)) + 1;
  std::vector<Invitation> inv;
  for (int r = 1; left > 0; ++r) {
    if (r > cap) throw Error(ErrorCode::kJoin, "join replay did not converge");
    inv.clear();
    for (const auto& [avail, i] : offers)
      if (avail <= r && joined_round[i.tree] < 0) inv.push_back(i);
    min_all = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < nb.size(); ++k)
      if (ts.member[nb[k]]) min_all = std::min(min_all, local_pc[k]);
    auto pc_of = [&](std::uint32_t slot) { return local_pc[slot]; };
    if (ts.config.strategy == TreeStrategy::kBfs) {
      // breadth-first trees: earliest available inviter, uniformly among ties
      if (inv.empty()) continue;
      for (int i = 0; i < gamma; ++i) {
        if (joined_round[i] >= 0) continue;
        std::vector<Invitation> mine;
        for (const auto& x : inv)
          if (x.tree == i) mine.push_back(x);
        if (mine.empty()) continue;
        auto c = pick_uniform(mine, rng);
        joined_round[i] = r;
        joined_slot[i] = c.slot;
        ++local_pc[c.slot];
        --left;
      }
      continue;
    }
    if (auto c = decide(inv, pc_of, min_all, ts, g, u, rng)) {
      joined_round[c->tree] = r;
      joined_slot[c->tree] = c->slot;
      ++local_pc[c->slot];
      --left;
    }
  }

  ts.member[u] = 1;
  for (int i = 0; i < gamma; ++i) {
    Tree& t = ts.trees[i];
    NodeId p = nb[joined_slot[i]];
    t.parent[u] = p;
    t.children[p].push_back(u);
    t.level[u] = t.level[p] + 1;
    t.join_round[u] = joined_round[i];
    ++ts.pc[g.slot_base(u) + joined_slot[i]];
  }
}

namespace {

void collect_subtree(const Tree& t, NodeId v, std::vector<NodeId>& out) {
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    out.push_back(x);
    for (NodeId c : t.children[x]) stack.push_back(c);
  }
}

void relevel(Tree& t, NodeId v) {
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (NodeId c : t.children[x]) {
      t.level[c] = t.level[x] + 1;
      stack.push_back(c);
    }
  }
}

void detach(TreeSet& ts, const Graph& g, Tree& t, NodeId v) {
  NodeId p = t.parent[v];
  if (p == kNoNode) return;
  std::erase(t.children[p], v);
  --ts.pc[g.slot_base(v) + g.slot_of(v, p)];
  t.parent[v] = kNoNode;
}

}  // namespace

DepartureResult handle_departure(TreeSet& ts, const Graph& g, NodeId u, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (u >= n || !ts.member[u]) throw Error(ErrorCode::kDomain, "departing node is not a member");
  for (std::size_t i = 0; i < ts.gamma(); ++i)
    if (ts.trees[i].root == u)
      throw Error(ErrorCode::kRootDeparture, "node " + std::to_string(u) + " is the root of tree " + std::to_string(i));

  std::mt19937_64 rng(mix_seed(seed, u));
  DepartureResult res;
  ts.member[u] = 0;
  std::vector<char> detached(n, 0);
  std::vector<NodeId> sub, fragments, next_fragments, cands;

  for (auto& t : ts.trees) {
    if (!t.contains(u)) continue;
    sub.clear();
    collect_subtree(t, u, sub);
    res.reassigned += sub.size() - 1;
    for (NodeId x : sub) detached[x] = 1;

    detach(ts, g, t, u);
    fragments.clear();
    for (NodeId c : std::vector<NodeId>(t.children[u])) {
      detach(ts, g, t, c);
      fragments.push_back(c);
    }
    t.children[u].clear();
    t.level[u] = -1;
    t.join_round[u] = -1;

    while (!fragments.empty()) {
      bool progress = false;
      std::shuffle(fragments.begin(), fragments.end(), rng);
      next_fragments.clear();
      for (NodeId f : fragments) {
        auto nb = g.neighbors(f);
        const std::size_t base = g.slot_base(f);
        cands.clear();
        int best = std::numeric_limits<int>::max();
        for (std::size_t k = 0; k < nb.size(); ++k) {
          NodeId w = nb[k];
          if (!ts.member[w] || !t.contains(w) || detached[w]) continue;
          int pcw = ts.pc[base + k];
          if (pcw < best) {
            best = pcw;
            cands.clear();
          }
          if (pcw == best) cands.push_back(w);
        }
        if (cands.empty()) {
          next_fragments.push_back(f);
          continue;
        }
        if (ts.config.strategy != TreeStrategy::kDivRand) {
          std::int32_t lo = std::numeric_limits<std::int32_t>::max();
          for (NodeId w : cands) lo = std::min(lo, t.level[w]);
          std::erase_if(cands, [&](NodeId w) { return t.level[w] != lo; });
        }
        NodeId p = pick_uniform(cands, rng);
        t.parent[f] = p;
        t.children[p].push_back(f);
        ++ts.pc[base + g.slot_of(f, p)];
        t.level[f] = t.level[p] + 1;
        relevel(t, f);
        sub.clear();
        collect_subtree(t, f, sub);
        for (NodeId x : sub) detached[x] = 0;
        ++res.reparented;
        progress = true;
      }
      fragments.swap(next_fragments);
      if (progress || fragments.empty()) continue;
      // every fragment root is stuck: split them so deeper nodes can try on their own
      bool split = false;
      next_fragments.clear();
      for (NodeId f : fragments) {
        next_fragments.push_back(f);
        for (NodeId c : std::vector<NodeId>(t.children[f])) {
          detach(ts, g, t, c);
          next_fragments.push_back(c);
          split = true;
        }
      }
      fragments.swap(next_fragments);
      if (split) continue;
      for (NodeId f : fragments) {
        t.level[f] = -1;
        t.join_round[f] = -1;
        detached[f] = 0;
      }
      fragments.clear();
    }
  }
  auto nb = g.neighbors(u);
  for (std::size_t k = 0; k < nb.size(); ++k) ts.pc[g.slot_base(u) + k] = 0;
  return res;
}

std::size_t descendants_count(const TreeSet& ts, NodeId node, int tree) {
  if (tree < 0 || static_cast<std::size_t>(tree) >= ts.gamma())
    throw Error(ErrorCode::kDomain, "tree index " + std::to_string(tree) + " out of range");
  const Tree& t = ts.trees[tree];
  if (node >= t.level.size() || !ts.member[node] || !t.contains(node))
    throw Error(ErrorCode::kDomain, "node " + std::to_string(node) + " is not in tree " + std::to_string(tree));
  std::size_t count = 0;
  std::vector<NodeId> stack(t.children[node].begin(), t.children[node].end());
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    ++count;
    for (NodeId c : t.children[x]) stack.push_back(c);
  }
  return count;
}

std::string dump_trees(const TreeSet& ts) {
  std::ostringstream out;
  out << "# tree node parent level\n";
  for (std::size_t i = 0; i < ts.gamma(); ++i) {
    const Tree& t = ts.trees[i];
    for (NodeId v = 0; v < t.level.size(); ++v) {
      if (!t.contains(v)) continue;
      out << i << ' ' << v << ' ';
      if (t.parent[v] == kNoNode) out << -1;
      else out << t.parent[v];
      out << ' ' << t.level[v] << '\n';
    }
  }
  return out.str();
}

void validate_tree_set(const TreeSet& ts, const Graph& g) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kValidation, m); };
  const std::size_t n = g.node_count();
  std::vector<int> parents(n, 0);
  for (std::size_t i = 0; i < ts.gamma(); ++i) {
    const Tree& t = ts.trees[i];
    const std::string tag = "tree " + std::to_string(i) + ": ";
    if (t.root >= n || t.level[t.root] != 0 || t.parent[t.root] != kNoNode) fail(tag + "bad root");
    for (NodeId v = 0; v < n; ++v) {
      if (!t.contains(v)) {
        if (t.parent[v] != kNoNode || !t.children[v].empty()) fail(tag + "absent node " + std::to_string(v) + " has links");
        continue;
      }
      if (!ts.member[v]) fail(tag + "non-member " + std::to_string(v) + " in tree");
      for (NodeId c : t.children[v])
        if (t.parent[c] != v) fail(tag + "child list of " + std::to_string(v) + " is inconsistent");
      if (v == t.root) continue;
      NodeId p = t.parent[v];
      if (p == kNoNode || !t.contains(p)) fail(tag + "node " + std::to_string(v) + " has no parent");
      if (!g.has_edge(v, p)) fail(tag + "tree edge is not a graph edge");
      if (t.level[v] != t.level[p] + 1) fail(tag + "level mismatch at " + std::to_string(v));
      if (std::count(t.children[p].begin(), t.children[p].end(), v) != 1) fail(tag + "parent does not list child");
      ++parents[v];
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    int sum = 0;
    for (std::size_t k = 0; k < g.degree(v); ++k) sum += ts.pc[g.slot_base(v) + k];
    if (sum != parents[v]) fail("parent counts of node " + std::to_string(v) + " do not match");
  }
  for (std::size_t i = 0; i < ts.gamma(); ++i)
    for (NodeId v = 0; v < n; ++v) {
      NodeId p = ts.trees[i].parent[v];
      if (p == kNoNode) continue;
      if (ts.pc[g.slot_base(v) + g.slot_of(v, p)] == 0) fail("missing parent count for " + std::to_string(v));
    }
}

}  // namespace f2f
