#include "f2f/adversary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

#include "f2f/error.hpp"

namespace f2f {

const char* adversary_mode_name(AdversaryMode m) {
  switch (m) {
    case AdversaryMode::kNone: return "none";
    case AdversaryMode::kRandomFailures: return "failures";
    case AdversaryMode::kAttRand: return "att-rand";
    case AdversaryMode::kAttRoot: return "att-root";
  }
  return "?";
}

AdversaryMode parse_adversary_mode(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != '-' && c != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "none") return AdversaryMode::kNone;
  if (t == "failures" || t == "randomfailures" || t == "failure") return AdversaryMode::kRandomFailures;
  if (t == "attrand") return AdversaryMode::kAttRand;
  if (t == "attroot") return AdversaryMode::kAttRoot;
  throw Error(ErrorCode::kParse, "unknown adversary mode '" + text + "'");
}

void AdversaryConfig::validate() const {
  if (!(failure_fraction >= 0.0 && failure_fraction <= 0.5))
    throw Error(ErrorCode::kValidation, "failure fraction must be in [0, 0.5]");
  if (attacks() && attacker_edges < 1) throw Error(ErrorCode::kValidation, "attack modes need attacker-edges >= 1");
}

std::vector<NodeId> failure_order(std::size_t n, std::uint64_t seed, NodeId exclude) {
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId v = 0; v < n; ++v)
    if (v != exclude) order.push_back(v);
  std::mt19937_64 rng(mix_seed(seed, 0x6661696cULL));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

LiveMask inject_failures(const Graph& g, double fraction, std::uint64_t seed, NodeId exclude) {
  if (!(fraction >= 0.0 && fraction <= 0.5)) throw Error(ErrorCode::kDomain, "failure fraction must be in [0, 0.5]");
  LiveMask mask = LiveMask::all(g.node_count());
  auto order = failure_order(g.node_count(), seed, exclude);
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(order.size()) + 1e-9));
  for (std::size_t i = 0; i < count; ++i) mask.live[order[i]] = 0;
  return mask;
}

AttackedGraph attach_attacker(const Graph& g, std::size_t x, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (x > n) throw Error(ErrorCode::kDomain, "attacker cannot have more edges than there are nodes");
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(mix_seed(seed, 0x617474ULL));
  // partial Fisher-Yates: first x entries are a uniform sample
  for (std::size_t i = 0; i < x; ++i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
    std::swap(ids[i], ids[j]);
  }
  auto edges = g.edges();
  const auto a = static_cast<NodeId>(n);
  for (std::size_t i = 0; i < x; ++i) edges.emplace_back(a, ids[i]);
  return {Graph::from_edges(n + 1, edges), a};
}

std::vector<NodeId> apply_att_root(int gamma, NodeId attacker) {
  if (gamma < 1) throw Error(ErrorCode::kValidation, "gamma must be >= 1");
  return std::vector<NodeId>(static_cast<std::size_t>(gamma), attacker);
}

void apply_att_rand(Embedding& emb, const TreeSet& ts, NodeId attacker, const EmbeddingConfig& cfg,
                    std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x72616e64ULL));
  std::vector<NodeId> stack;
  for (std::size_t i = 0; i < ts.gamma(); ++i) {
    const Tree& t = ts.trees[i];
    if (!t.contains(attacker)) continue;
    const auto depth = static_cast<std::size_t>(t.level[attacker]);
    for (NodeId c : t.children[attacker]) {
      Coordinate fake;
      for (std::size_t j = 0; j < depth; ++j) fake.push_back(Word128::random(rng, cfg.bits));
      stack.assign(1, c);
      while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        Coordinate& x = emb.coords[i][v];
        std::copy(fake.begin(), fake.end(), x.begin());
        for (NodeId w : t.children[v]) stack.push_back(w);
      }
    }
  }
}

}  // namespace f2f
