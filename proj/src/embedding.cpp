#include "f2f/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "f2f/error.hpp"

namespace f2f {

const char* metric_name(Metric m) { return m == Metric::kTd ? "td" : "cpl"; }

Metric parse_metric(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "td") return Metric::kTd;
  if (t == "cpl") return Metric::kCpl;
  throw Error(ErrorCode::kParse, "unknown metric '" + text + "'");
}

void EmbeddingConfig::validate() const {
  if (bits < 1 || bits > 128) throw Error(ErrorCode::kValidation, "bits per element must be in [1,128]");
  if (max_length < 1) throw Error(ErrorCode::kValidation, "address length must be >= 1");
  if (cpl_constant < 1) throw Error(ErrorCode::kValidation, "cpl constant must be >= 1");
}

namespace {

void label_children(Embedding& emb, const Tree& t, std::size_t tree, NodeId root_of_walk, const EmbeddingConfig& cfg,
                    std::mt19937_64& rng) {
  std::vector<NodeId> stack{root_of_walk};
  std::unordered_set<Word128, Word128Hash> used;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    const auto& kids = t.children[u];
    if (kids.empty()) continue;
    if (cfg.bits < 64 && kids.size() > (std::uint64_t{1} << cfg.bits))
      throw Error(ErrorCode::kState, "node " + std::to_string(u) + " has more children than distinct " +
                                         std::to_string(cfg.bits) + "-bit labels");
    used.clear();
    for (NodeId c : kids) {
      Word128 label = Word128::random(rng, cfg.bits);
      while (!used.insert(label).second) {
        ++emb.collision_redraws;
        label = Word128::random(rng, cfg.bits);
      }
      Coordinate& x = emb.coords[tree][c];
      x = emb.coords[tree][u];
      x.push_back(label);
      stack.push_back(c);
    }
  }
}

}  // namespace

Embedding assign_coordinates(const TreeSet& ts, const EmbeddingConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Embedding emb;
  emb.coords.resize(ts.gamma());
  for (std::size_t i = 0; i < ts.gamma(); ++i) {
    const Tree& t = ts.trees[i];
    const auto max_level = *std::max_element(t.level.begin(), t.level.end());
    if (max_level >= cfg.max_length)
      throw Error(ErrorCode::kValidation, "tree depth " + std::to_string(max_level) +
                                              " does not fit the address length " + std::to_string(cfg.max_length));
    emb.coords[i].assign(t.level.size(), {});
    std::mt19937_64 rng(mix_seed(seed, 0x656d62ULL + i));
    label_children(emb, t, i, t.root, cfg, rng);
  }
  return emb;
}

void reassign_subtree(Embedding& emb, const TreeSet& ts, std::size_t tree, NodeId node, const EmbeddingConfig& cfg,
                      std::mt19937_64& rng) {
  const Tree& t = ts.trees[tree];
  if (!t.contains(node)) {
    emb.coords[tree][node].clear();
    return;
  }
  if (node != t.root) {
    NodeId p = t.parent[node];
    Word128 label;
    bool clash = true;
    while (clash) {
      label = Word128::random(rng, cfg.bits);
      clash = false;
      for (NodeId s : t.children[p])
        if (s != node && emb.coords[tree][s].size() == emb.coords[tree][p].size() + 1 &&
            emb.coords[tree][s].back() == label)
          clash = true;
    }
    emb.coords[tree][node] = emb.coords[tree][p];
    emb.coords[tree][node].push_back(label);
  }
  label_children(emb, t, tree, node, cfg, rng);
}

std::size_t cpl(const Coordinate& a, const Coordinate& b) {
  const std::size_t m = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < m && a[i] == b[i]) ++i;
  return i;
}

std::size_t delta_td(const Coordinate& a, const Coordinate& b) { return a.size() + b.size() - 2 * cpl(a, b); }

Rational delta_cpl(const Coordinate& a, const Coordinate& b, const EmbeddingConfig& cfg) {
  const std::size_t c = cpl(a, b);
  if (c == a.size() && c == b.size()) return {0, 1};
  const std::int64_t tot = static_cast<std::int64_t>(a.size() + b.size()) + 1;
  return {(cfg.cpl_constant - static_cast<std::int64_t>(c)) * tot - 1, tot};
}

DistanceKey make_key(Metric m, std::size_t common, std::size_t len_a, std::size_t len_b, bool equal,
                     int cpl_constant) {
  if (m == Metric::kTd) return {static_cast<std::int64_t>(len_a + len_b - 2 * common), 0};
  if (equal) return {0, 0};
  return {cpl_constant - static_cast<std::int64_t>(common), static_cast<std::int64_t>(len_a + len_b)};
}

DistanceKey distance_key(Metric m, const Coordinate& a, const Coordinate& b, int cpl_constant) {
  const std::size_t c = cpl(a, b);
  return make_key(m, c, a.size(), b.size(), c == a.size() && c == b.size(), cpl_constant);
}

Rational key_value(Metric m, const DistanceKey& k, int) {
  if (m == Metric::kTd) return {k.major, 1};
  if (k.major == 0 && k.minor == 0) return {0, 1};
  return {k.major * (k.minor + 1) - 1, k.minor + 1};
}

std::string coordinate_hex(const Coordinate& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += c[i].hex();
  }
  return out + ")";
}

}  // namespace f2f
