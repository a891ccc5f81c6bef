#include "f2f/experiments.hpp"

#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "f2f/error.hpp"

namespace f2f {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "bad number '" + s + "' in " + what);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Graph load_graph_source(const std::string& source, std::uint64_t seed) {
  auto parts = split(source, ':');
  if (parts.size() == 3 && (parts[0] == "pa" || parts[0] == "er")) {
    const double n = to_double(parts[1], "graph source");
    if (n < 2 || std::floor(n) != n) throw Error(ErrorCode::kParse, "bad node count in graph source '" + source + "'");
    const double param = to_double(parts[2], "graph source");
    const auto model = parts[0] == "pa" ? SyntheticModel::kPreferentialAttachment : SyntheticModel::kErdosRenyi;
    return giant_component(generate_synthetic(model, static_cast<std::size_t>(n), param, seed));
  }
  return giant_component(load_edge_list(source));
}

void Scenario::validate() const {
  trees.validate();
  embedding.validate();
  adversary.validate();
  if (routing.tau < 1 || routing.tau > trees.gamma) throw Error(ErrorCode::kValidation, "tau must be in [1, gamma]");
  if (pairs < 1) throw Error(ErrorCode::kValidation, "pairs must be >= 1");
  if (runs < 1) throw Error(ErrorCode::kValidation, "runs must be >= 1");
  if (routing.addressing == Addressing::kPpp) {
    if (routing.metric != Metric::kCpl)
      throw Error(ErrorCode::kValidation, "encrypted addresses require the cpl metric");
    if (embedding.bits % 2 != 0) throw Error(ErrorCode::kValidation, "encrypted addresses require an even bit width");
  }
  if (dht) dht->validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_count(const std::string& value, const std::string& key) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::kParse, "option '" + key + "' needs a non-negative integer, got '" + value + "'");
  std::uint64_t v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{}) throw Error(ErrorCode::kParse, "option '" + key + "' is out of range");
  return v;
}

bool to_bool(const std::string& value, const std::string& key) {
  if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "off" || value == "no") return false;
  throw Error(ErrorCode::kParse, "option '" + key + "' needs a boolean, got '" + value + "'");
}

}  // namespace

void set_scenario_option(Scenario& s, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  for (char& c : key)
    if (c == '_') c = '-';
  const std::string value = trim(raw_value);
  auto need_int = [&] { return static_cast<int>(to_count(value, key)); };
  if (key == "graph") s.graph_source = value;
  else if (key == "label") s.label = value;
  else if (key == "gamma") s.trees.gamma = need_int();
  else if (key == "q") s.trees.accept_prob = to_double(value, key);
  else if (key == "strategy") s.trees.strategy = parse_strategy(value);
  else if (key == "metric") s.routing.metric = parse_metric(value);
  else if (key == "tau") s.routing.tau = need_int();
  else if (key == "addressing") s.routing.addressing = parse_addressing(value);
  else if (key == "embedding-choice") s.routing.choice = parse_choice(value);
  else if (key == "backtracking") s.routing.backtracking = to_bool(value, key);
  else if (key == "max-hops") s.routing.max_hops = to_count(value, key);
  else if (key == "mode") s.adversary.mode = parse_adversary_mode(value);
  else if (key == "attacker-edges") s.adversary.attacker_edges = to_count(value, key);
  else if (key == "failure-fraction") s.adversary.failure_fraction = to_double(value, key);
  else if (key == "adversary-seed") s.adversary.seed = to_count(value, key);
  else if (key == "pairs") s.pairs = to_count(value, key);
  else if (key == "runs") s.runs = to_count(value, key);
  else if (key == "seed") s.master_seed = to_count(value, key);
  else if (key == "bits") s.embedding.bits = need_int();
  else if (key == "length") {
    s.embedding.max_length = need_int();
    s.embedding.cpl_constant = s.embedding.max_length;
  } else if (key == "cpl-constant") s.embedding.cpl_constant = need_int();
  else if (key == "root-policy") {
    std::string v = value;
    if (v == "random") s.root_policy = RootPolicy::kRandom;
    else if (v == "max-degree") s.root_policy = RootPolicy::kMaxDegree;
    else if (v.rfind("fixed:", 0) == 0) {
      s.root_policy = RootPolicy::kFixed;
      s.fixed_root = static_cast<NodeId>(to_count(v.substr(6), key));
    } else {
      throw Error(ErrorCode::kParse, "root-policy must be random, max-degree or fixed:<id>");
    }
  } else if (key == "dht") {
    if (to_bool(value, key)) {
      if (!s.dht) s.dht = DhtConfig{};
    } else {
      s.dht.reset();
    }
  } else if (key == "bucket-size" || key == "alpha" || key == "replication") {
    if (!s.dht) s.dht = DhtConfig{};
    if (key == "bucket-size") s.dht->bucket_size = need_int();
    else if (key == "alpha") s.dht->alpha = need_int();
    else s.dht->replication = need_int();
  } else if (key == "dht-lookups") s.dht_lookups = to_count(value, key);
  else if (key == "stabilization-samples") s.stabilization_samples = to_count(value, key);
  else if (key == "threads") s.threads = static_cast<unsigned>(to_count(value, key));
  else throw Error(ErrorCode::kParse, "unknown scenario option '" + raw_key + "'");
}

void load_scenario_config(Scenario& s, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      set_scenario_option(s, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

double stabilization_metric(const TreeSet& ts, const Graph& g, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::kValidation, "samples must be >= 1");
  std::vector<NodeId> cands;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!ts.member[v]) continue;
    bool root = false;
    for (const auto& t : ts.trees) root = root || t.root == v;
    if (!root) cands.push_back(v);
  }
  if (cands.empty()) return 0.0;
  std::mt19937_64 rng(mix_seed(seed, 0x73746162ULL));
  std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    TreeSet copy = ts;
    total += static_cast<double>(handle_departure(copy, g, cands[pick(rng)], mix_seed(seed, i)).reassigned);
  }
  return total / static_cast<double>(samples);
}

RunState prepare_run(const Scenario& s, const Graph& base, std::size_t run) {
  RunState st;
  st.seed = mix_seed(s.master_seed, run);
  const std::uint64_t seed = st.seed;
  if (s.adversary.attacks()) {
    AttackedGraph ag = attach_attacker(base, s.adversary.attacker_edges, mix_seed(seed ^ s.adversary.seed, 1));
    st.graph = std::move(ag.graph);
    st.attacker = ag.attacker;
  } else {
    st.graph = base;
  }
  const Graph& g = st.graph;
  std::vector<NodeId> roots;
  if (s.adversary.mode == AdversaryMode::kAttRoot) {
    roots = apply_att_root(s.trees.gamma, st.attacker);
  } else if (s.root_policy == RootPolicy::kRandom) {
    for (int i = 0; i < s.trees.gamma; ++i) roots.push_back(elect_root(g, RootPolicy::kRandom, mix_seed(seed, 10 + i)));
  } else {
    roots.assign(s.trees.gamma, elect_root(g, s.root_policy, seed, s.fixed_root));
  }
  TreeConfig tc = s.trees;
  tc.rng_seed = mix_seed(seed, 2);
  st.trees = construct_trees(g, tc, roots);
  st.embedding = assign_coordinates(st.trees, s.embedding, mix_seed(seed, 3));
  if (s.adversary.mode == AdversaryMode::kAttRand)
    apply_att_rand(st.embedding, st.trees, st.attacker, s.embedding, mix_seed(seed, 4));
  st.live = inject_failures(g, s.adversary.failure_fraction, mix_seed(seed ^ s.adversary.seed, 6), st.attacker);
  st.live.attacker = st.attacker;
  return st;
}

RunMetrics run_once(const Scenario& s, const Graph& base, std::size_t run) {
  RunState st = prepare_run(s, base, run);
  const std::uint64_t seed = st.seed;
  const Graph& g = st.graph;
  const TreeSet& ts = st.trees;
  const Embedding& emb = st.embedding;
  const LiveMask& live = st.live;
  RunMetrics m;
  if (s.stabilization_samples > 0) m.stabilization_cost = stabilization_metric(ts, g, s.stabilization_samples, mix_seed(seed, 5));

  // pairs: live honest nodes in the same live component
  Components comp = connected_components(g, live.live);
  std::vector<std::vector<NodeId>> by_comp(comp.size.size());
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (live.responsive(v)) by_comp[comp.label[v]].push_back(v);
  std::vector<NodeId> sources;
  for (const auto& members : by_comp)
    if (members.size() >= 2) sources.insert(sources.end(), members.begin(), members.end());

  RoutingConfig rc = s.routing;
  rc.embedding = s.embedding;
  std::mt19937_64 rng(mix_seed(seed, 7));
  std::vector<Word128> mac_keys(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) mac_keys[v] = Word128::random(rng, s.embedding.bits);
  std::vector<KeyRing> rings;
  std::unique_ptr<BlockCipher> cipher;
  if (rc.addressing == Addressing::kPpp) {
    cipher = make_default_cipher(s.embedding.bits);
    for (std::size_t i = 0; i < ts.gamma(); ++i)
      rings.push_back(distribute_subtree_keys(ts, i, mix_seed(seed, 8), s.embedding.bits));
  }

  std::size_t successes = 0;
  double hop_sum = 0.0;
  std::vector<Word128> next_elems;
  std::vector<RouteTarget> targets;
  if (!sources.empty()) {
    std::uniform_int_distribution<std::size_t> pick_src(0, sources.size() - 1);
    for (std::size_t p = 0; p < s.pairs; ++p) {
      const NodeId src = sources[pick_src(rng)];
      const auto& members = by_comp[comp.label[src]];
      NodeId dst = src;
      while (dst == src) dst = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
      targets.clear();
      for (std::size_t i = 0; i < ts.gamma(); ++i) {
        const Coordinate& x = emb.coords[i][dst];
        if (rc.addressing == Addressing::kCoordinate) {
          targets.push_back(RouteTarget::coordinate(dst, i, x));
          continue;
        }
        next_elems.clear();
        for (NodeId c : ts.trees[i].children[dst]) next_elems.push_back(emb.coords[i][c][x.size()]);
        AddressKeys keys{mac_keys[dst], {}};
        const Word128 s_seed = Word128::random(rng, s.embedding.bits);
        const Word128 s_pad = Word128::random(rng, s.embedding.bits);
        ReturnAddress a = generate_rp(x, keys, next_elems, s_seed, s_pad, s.embedding, static_cast<int>(i));
        if (rc.addressing == Addressing::kReturnAddress) {
          targets.push_back(RouteTarget::address(dst, std::move(a)));
        } else {
          keys.subtree_keys = rings[i][dst];
          PppAddress pa = add_ppp_layer(a, keys, x.size(), *cipher, s.embedding);
          targets.push_back(RouteTarget::encrypted(dst, std::move(pa), rings[i], *cipher));
        }
      }
      MultiRouteOutcome r = route_multi(g, emb, src, targets, rc, live, mix_seed(seed, 1000 + p));
      if (r.success) {
        ++successes;
        hop_sum += static_cast<double>(*r.best_hops);
      }
    }
  }
  m.success_ratio = static_cast<double>(successes) / static_cast<double>(s.pairs);
  if (successes > 0) m.routing_length = hop_sum / static_cast<double>(successes);

  if (s.dht) {
    Overlay ov = build_overlay(g.node_count(), *s.dht, mix_seed(seed, 9));
    std::vector<NodeId> origins;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (live.responsive(v)) origins.push_back(v);
    const std::size_t lookups = s.dht_lookups ? s.dht_lookups : s.pairs;
    double total = 0.0;
    if (!origins.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, origins.size() - 1);
      for (std::size_t i = 0; i < lookups; ++i) {
        const NodeId origin = origins[pick(rng)];
        const KadId key = KadId::random(rng);
        total += static_cast<double>(dht_lookup(g, emb, ov, key, origin, rc, live, mix_seed(seed, 500000 + i)).underlay_hops);
      }
      m.dht_underlay_hops = total / static_cast<double>(lookups);
    }
  }
  return m;
}

double ci95_halfwidth(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(static_cast<double>(n));
}

std::vector<MetricRow> aggregate(const std::string& label, const std::vector<RunMetrics>& runs) {
  std::vector<MetricRow> rows;
  auto emit = [&](const std::string& name, auto getter) {
    std::vector<double> vals;
    for (const auto& r : runs)
      if (auto v = getter(r)) vals.push_back(*v);
    if (vals.empty()) return;
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    rows.push_back({label, name, mean, ci95_halfwidth(vals), vals.size()});
  };
  emit("routing_length", [](const RunMetrics& r) { return r.routing_length; });
  emit("success_ratio", [](const RunMetrics& r) { return std::optional<double>(r.success_ratio); });
  emit("stabilization_cost", [](const RunMetrics& r) { return r.stabilization_cost; });
  emit("dht_underlay_hops", [](const RunMetrics& r) { return r.dht_underlay_hops; });
  return rows;
}

std::vector<MetricRow> run_scenario_on(const Scenario& s, const Graph& base, const ProgressFn& progress) {
  s.validate();
  std::vector<RunMetrics> results(s.runs);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= s.runs) return;
      try {
        results[r] = run_once(s, base, r);
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next = s.runs;
        return;
      }
      if (progress) {
        std::lock_guard lock(log_mutex);
        progress(s.label + ": run " + std::to_string(r + 1) + "/" + std::to_string(s.runs) + " done");
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(s.threads, static_cast<unsigned>(s.runs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(s.label, results);
}

std::vector<MetricRow> run_scenario(const Scenario& s, const ProgressFn& progress) {
  s.validate();
  Graph base = load_graph_source(s.graph_source, s.master_seed);
  if (progress)
    progress(s.label + ": graph with " + std::to_string(base.node_count()) + " nodes, " +
             std::to_string(base.edge_count()) + " edges");
  return run_scenario_on(s, base, progress);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string csv_text(const std::vector<MetricRow>& rows) {
  std::string out = "scenario,metric,mean,ci95,runs\n";
  for (const auto& r : rows)
    out += csv_field(r.scenario) + ',' + r.metric + ',' + format_double(r.mean) + ',' + format_double(r.ci95) + ',' +
           std::to_string(r.runs) + '\n';
  return out;
}

void write_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidInput, "no rows to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << csv_text(rows);
  if (!out) throw Error(ErrorCode::kIo, "write to " + path.string() + " failed");
}

std::vector<MetricRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("scenario,metric,mean,ci95,runs", 0) != 0) throw Error(ErrorCode::kParse, "missing CSV header");
  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = parse_csv_line(line);
    if (f.size() != 5) throw Error(ErrorCode::kParse, "CSV row with " + std::to_string(f.size()) + " fields");
    rows.push_back({f[0], f[1], to_double(f[2], "mean"), to_double(f[3], "ci95"),
                    static_cast<std::size_t>(to_double(f[4], "runs"))});
  }
  return rows;
}

std::vector<Scenario> sweep_scenarios(const Scenario& base, const std::vector<int>& gammas,
                                      const std::vector<TreeStrategy>& strategies, const std::vector<Metric>& metrics) {
  std::vector<Scenario> out;
  for (int g : gammas)
    for (auto st : strategies)
      for (auto m : metrics) {
        Scenario s = base;
        s.trees.gamma = g;
        s.trees.strategy = st;
        s.routing.metric = m;
        s.routing.tau = std::min(s.routing.tau, g);
        s.label = base.label + "-g" + std::to_string(g) + "-" + strategy_name(st) + "-" + metric_name(m);
        out.push_back(std::move(s));
      }
  return out;
}

}  // namespace f2f
