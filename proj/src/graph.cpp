#include "f2f/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include "f2f/error.hpp"
#include "f2f/word.hpp"

namespace f2f {

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::uint32_t> deg(n, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error(ErrorCode::kDomain, "edge endpoint out of range");
    if (u == v) continue;
    ++deg[u];
    ++deg[v];
  }
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::uint32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    g.adjacency_[fill[u]++] = v;
    g.adjacency_[fill[v]++] = u;
  }
  // sort and dedup each list, then compact
  std::vector<std::uint32_t> offsets(n + 1, 0);
  std::size_t out = 0;
  for (std::size_t u = 0; u < n; ++u) {
    auto first = g.adjacency_.begin() + g.offsets_[u];
    auto last = g.adjacency_.begin() + g.offsets_[u + 1];
    std::sort(first, last);
    last = std::unique(first, last);
    offsets[u] = static_cast<std::uint32_t>(out);
    for (auto it = first; it != last; ++it) g.adjacency_[out++] = *it;
  }
  offsets[n] = static_cast<std::uint32_t>(out);
  g.adjacency_.resize(out);
  g.adjacency_.shrink_to_fit();
  g.offsets_ = std::move(offsets);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const { return slot_of(u, v) >= 0; }

std::int64_t Graph::slot_of(NodeId u, NodeId v) const {
  if (u >= node_count()) return -1;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return -1;
  return it - nb.begin();
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  while (std::getline(in, line)) {
    ++line_no;
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == '%') continue;
    std::istringstream fields(line);
    long long a = 0, b = 0;
    if (!(fields >> a >> b) || a < 0 || b < 0)
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected two non-negative node ids");
    raw.emplace_back(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }
  std::vector<std::uint64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    if (a == b) continue;
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) throw Error(ErrorCode::kInvalidInput, "edge list contains no edges");
  auto index = [&](std::uint64_t x) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw)
    if (a != b) edges.emplace_back(index(a), index(b));
  return Graph::from_edges(ids.size(), edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

namespace {

Graph erdos_renyi(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (p >= 1.0) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
  }
  // geometric skipping over the upper triangle
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_q = std::log1p(-p);
  long long v = 1, w = -1;
  const long long nn = static_cast<long long>(n);
  while (v < nn) {
    double r = unif(rng);
    w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
  }
  return Graph::from_edges(n, edges);
}

Graph preferential_attachment(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> ends;  // every edge endpoint once, for degree-proportional draws
  const std::size_t seed_size = std::min(n, m + 1);
  for (NodeId u = 0; u < seed_size; ++u)
    for (NodeId v = u + 1; v < seed_size; ++v) {
      edges.emplace_back(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  if (seed_size == 1 && n > 1) ends.push_back(0);
  std::vector<NodeId> picked;
  for (NodeId u = static_cast<NodeId>(seed_size); u < n; ++u) {
    picked.clear();
    const std::size_t want = std::min<std::size_t>(m, u);
    while (picked.size() < want) {
      std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
      NodeId t = ends[pick(rng)];
      if (std::find(picked.begin(), picked.end(), t) == picked.end()) picked.push_back(t);
    }
    for (NodeId t : picked) {
      edges.emplace_back(u, t);
      ends.push_back(u);
      ends.push_back(t);
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

Graph generate_synthetic(SyntheticModel model, std::size_t n, double param, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kInvalidInput, "synthetic graph needs n >= 2");
  if (model == SyntheticModel::kErdosRenyi) {
    if (!(param > 0.0 && param <= 1.0)) throw Error(ErrorCode::kInvalidInput, "edge probability must be in (0,1]");
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::mt19937_64 rng(mix_seed(seed, attempt));
      Graph g = erdos_renyi(n, param, rng);
      if (is_connected(g)) return g;
    }
    throw Error(ErrorCode::kGeneration, "no connected Erdos-Renyi graph after 16 attempts; raise p");
  }
  if (!(param >= 1.0) || std::floor(param) != param)
    throw Error(ErrorCode::kInvalidInput, "attachment degree must be an integer >= 1");
  std::mt19937_64 rng(mix_seed(seed, 0));
  return preferential_attachment(n, static_cast<std::size_t>(param), rng);
}

Components connected_components(const Graph& g, std::span<const char> mask) {
  const std::size_t n = g.node_count();
  Components c;
  c.label.assign(n, -1);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (c.label[s] >= 0 || (!mask.empty() && !mask[s])) continue;
    const auto id = static_cast<std::int32_t>(c.size.size());
    std::size_t count = 0;
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++count;
      for (NodeId v : g.neighbors(u)) {
        if (c.label[v] >= 0 || (!mask.empty() && !mask[v])) continue;
        c.label[v] = id;
        stack.push_back(v);
      }
    }
    c.size.push_back(count);
  }
  return c;
}

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return false;
  return connected_components(g).size.size() == 1;
}

Graph giant_component(const Graph& g, std::vector<NodeId>* original_ids) {
  Components c = connected_components(g);
  if (c.size.empty()) {
    if (original_ids) original_ids->clear();
    return Graph{};
  }
  // labels are assigned in order of smallest member, so max_element picks the lowest-id tie
  const auto best = static_cast<std::int32_t>(std::max_element(c.size.begin(), c.size.end()) - c.size.begin());
  std::vector<NodeId> remap(g.node_count(), kNoNode);
  std::vector<NodeId> old;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (c.label[u] == best) {
      remap[u] = static_cast<NodeId>(old.size());
      old.push_back(u);
    }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (auto [u, v] : g.edges())
    if (remap[u] != kNoNode) edges.emplace_back(remap[u], remap[v]);
  if (original_ids) *original_ids = old;
  return Graph::from_edges(old.size(), edges);
}

std::vector<std::int32_t> shortest_path_lengths(const Graph& g, NodeId source, std::span<const char> mask) {
  if (source >= g.node_count()) throw Error(ErrorCode::kDomain, "source node out of range");
  std::vector<std::int32_t> dist(g.node_count(), kUnreachable);
  if (!mask.empty() && !mask[source]) return dist;
  std::vector<NodeId> frontier{source}, next;
  dist[source] = 0;
  std::int32_t d = 0;
  while (!frontier.empty()) {
    ++d;
    next.clear();
    for (NodeId u : frontier)
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] != kUnreachable || (!mask.empty() && !mask[v])) continue;
        dist[v] = d;
        next.push_back(v);
      }
    frontier.swap(next);
  }
  return dist;
}

GraphStats compute_stats(const Graph& g) {
  GraphStats s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  if (s.node_count == 0) return s;
  s.average_degree = 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(s.node_count);
  Components c = connected_components(g);
  const auto best = static_cast<std::int32_t>(std::max_element(c.size.begin(), c.size.end()) - c.size.begin());
  s.giant_component_size = c.size[best];
  NodeId start = 0;
  while (c.label[start] != best) ++start;
  auto far = [&](NodeId from, std::int32_t& ecc) {
    auto d = shortest_path_lengths(g, from);
    auto it = std::max_element(d.begin(), d.end());
    ecc = *it;
    return static_cast<NodeId>(it - d.begin());
  };
  std::int32_t ecc = 0;
  NodeId a = far(start, ecc);
  far(a, ecc);
  s.diameter_estimate = ecc;
  return s;
}

std::string stats_csv_header() { return "n,m,giant,diameter,mean_degree"; }

std::string stats_csv_row(const GraphStats& s) {
  std::ostringstream out;
  out.precision(17);
  out << s.node_count << ',' << s.edge_count << ',' << s.giant_component_size << ',' << s.diameter_estimate << ','
      << s.average_degree;
  return out.str();
}

}  // namespace f2f
