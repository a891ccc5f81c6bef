#include "f2f/f2f.h"

#include <fstream>
#include <string>
#include <vector>

#include "f2f/error.hpp"
#include "f2f/experiments.hpp"

struct f2f_graph {
  f2f::Graph graph;
};

struct f2f_scenario {
  f2f::Scenario scenario;
};

struct f2f_result {
  std::vector<f2f::MetricRow> rows;
};

namespace {

thread_local std::string g_last_error;

f2f_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

f2f_status to_status(f2f::ErrorCode c) {
  using f2f::ErrorCode;
  switch (c) {
    case ErrorCode::kParse: return F2F_ERR_PARSE;
    case ErrorCode::kInvalidInput: return F2F_ERR_INVALID_INPUT;
    case ErrorCode::kDomain: return F2F_ERR_DOMAIN;
    case ErrorCode::kGeneration: return F2F_ERR_GENERATION;
    case ErrorCode::kConstruction: return F2F_ERR_CONSTRUCTION;
    case ErrorCode::kJoin: return F2F_ERR_JOIN;
    case ErrorCode::kRootDeparture: return F2F_ERR_ROOT_DEPARTURE;
    case ErrorCode::kState: return F2F_ERR_STATE;
    case ErrorCode::kUnsupported: return F2F_ERR_UNSUPPORTED;
    case ErrorCode::kValidation: return F2F_ERR_VALIDATION;
    case ErrorCode::kIo: return F2F_ERR_IO;
  }
  return F2F_ERR_INTERNAL;
}

template <typename F>
f2f_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return F2F_OK;
  } catch (const f2f::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return F2F_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return F2F_ERR_INTERNAL;
  }
}

f2f_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return F2F_ERR_NULL_ARGUMENT;
}

void log_line(const std::string& msg) {
  if (g_log_fn) g_log_fn(msg.c_str(), g_log_user);
}

f2f::Graph scenario_graph(const f2f::Scenario& s) { return f2f::load_graph_source(s.graph_source, s.master_seed); }

}  // namespace

extern "C" {

const char* f2f_last_error_message(void) { return g_last_error.c_str(); }

const char* f2f_status_name(f2f_status status) {
  switch (status) {
    case F2F_OK: return "ok";
    case F2F_ERR_NULL_ARGUMENT: return "null argument";
    case F2F_ERR_INTERNAL: return "internal error";
    default: break;
  }
  if (status >= F2F_ERR_PARSE && status <= F2F_ERR_IO) return f2f::error_code_name(static_cast<f2f::ErrorCode>(status));
  return "unknown status";
}

const char* f2f_version(void) { return "0.1.0"; }

void f2f_set_log_callback(f2f_log_fn fn, void* user) {
  g_log_fn = fn;
  g_log_user = user;
}

f2f_status f2f_graph_load(const char* path, f2f_graph** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_graph{f2f::load_edge_list(path)}; });
}

f2f_status f2f_graph_generate(const char* model, uint64_t n, double param, uint64_t seed, f2f_graph** out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  return guarded([&] {
    const std::string m = model;
    f2f::SyntheticModel sm;
    if (m == "pa") sm = f2f::SyntheticModel::kPreferentialAttachment;
    else if (m == "er") sm = f2f::SyntheticModel::kErdosRenyi;
    else throw f2f::Error(f2f::ErrorCode::kParse, "unknown model '" + m + "' (expected pa or er)");
    *out = new f2f_graph{f2f::generate_synthetic(sm, n, param, seed)};
  });
}

f2f_status f2f_graph_from_source(const char* source, uint64_t seed, f2f_graph** out) {
  if (!source) return null_arg("source");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_graph{f2f::load_graph_source(source, seed)}; });
}

f2f_status f2f_graph_giant_component(const f2f_graph* g, f2f_graph** out) {
  if (!g) return null_arg("g");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_graph{f2f::giant_component(g->graph)}; });
}

uint64_t f2f_graph_node_count(const f2f_graph* g) { return g ? g->graph.node_count() : 0; }
uint64_t f2f_graph_edge_count(const f2f_graph* g) { return g ? g->graph.edge_count() : 0; }

f2f_status f2f_graph_stats_get(const f2f_graph* g, f2f_graph_stats* out) {
  if (!g) return null_arg("g");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto s = f2f::compute_stats(g->graph);
    *out = f2f_graph_stats{s.node_count, s.edge_count, s.giant_component_size, s.diameter_estimate, s.average_degree};
  });
}

f2f_status f2f_graph_stats_write_csv(const f2f_graph* g, const char* path) {
  if (!g) return null_arg("g");
  if (!path) return null_arg("path");
  return guarded([&] {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw f2f::Error(f2f::ErrorCode::kIo, std::string("cannot write ") + path);
    f << f2f::stats_csv_header() << '\n' << f2f::stats_csv_row(f2f::compute_stats(g->graph)) << '\n';
    if (!f) throw f2f::Error(f2f::ErrorCode::kIo, std::string("write to ") + path + " failed");
  });
}

void f2f_graph_free(f2f_graph* g) { delete g; }

f2f_status f2f_scenario_create(f2f_scenario** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_scenario{}; });
}

f2f_status f2f_scenario_set(f2f_scenario* s, const char* key, const char* value) {
  if (!s) return null_arg("s");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] { f2f::set_scenario_option(s->scenario, key, value); });
}

f2f_status f2f_scenario_load_config(f2f_scenario* s, const char* path) {
  if (!s) return null_arg("s");
  if (!path) return null_arg("path");
  return guarded([&] { f2f::load_scenario_config(s->scenario, path); });
}

f2f_status f2f_scenario_run(const f2f_scenario* s, f2f_result** out) {
  if (!s) return null_arg("s");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_result{f2f::run_scenario(s->scenario, log_line)}; });
}

f2f_status f2f_scenario_run_on(const f2f_scenario* s, const f2f_graph* g, f2f_result** out) {
  if (!s) return null_arg("s");
  if (!g) return null_arg("g");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_result{f2f::run_scenario_on(s->scenario, g->graph, log_line)}; });
}

void f2f_scenario_free(f2f_scenario* s) { delete s; }

f2f_status f2f_result_create(f2f_result** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new f2f_result{}; });
}

uint64_t f2f_result_row_count(const f2f_result* r) { return r ? r->rows.size() : 0; }

f2f_status f2f_result_row(const f2f_result* r, uint64_t index, f2f_metric_row* out) {
  if (!r) return null_arg("r");
  if (!out) return null_arg("out");
  if (index >= r->rows.size()) {
    g_last_error = "row index out of range";
    return F2F_ERR_DOMAIN;
  }
  const auto& row = r->rows[index];
  *out = f2f_metric_row{row.scenario.c_str(), row.metric.c_str(), row.mean, row.ci95, row.runs};
  return F2F_OK;
}

f2f_status f2f_result_append(f2f_result* dst, f2f_result* src) {
  if (!dst) return null_arg("dst");
  if (!src) return null_arg("src");
  return guarded([&] {
    if (dst == src) return;
    dst->rows.insert(dst->rows.end(), src->rows.begin(), src->rows.end());
    src->rows.clear();
  });
}

f2f_status f2f_result_write_csv(const f2f_result* r, const char* path) {
  if (!r) return null_arg("r");
  if (!path) return null_arg("path");
  return guarded([&] { f2f::write_csv(r->rows, path); });
}

void f2f_result_free(f2f_result* r) { delete r; }

f2f_status f2f_trees_dump(const f2f_scenario* s, const char* path) {
  if (!s) return null_arg("s");
  if (!path) return null_arg("path");
  return guarded([&] {
    s->scenario.validate();
    auto st = f2f::prepare_run(s->scenario, scenario_graph(s->scenario), 0);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw f2f::Error(f2f::ErrorCode::kIo, std::string("cannot write ") + path);
    f << f2f::dump_trees(st.trees);
  });
}

f2f_status f2f_address_export(const f2f_scenario* s, uint64_t node, uint64_t tree, const char* path) {
  if (!s) return null_arg("s");
  if (!path) return null_arg("path");
  return guarded([&] {
    const auto& sc = s->scenario;
    sc.validate();
    auto st = f2f::prepare_run(sc, scenario_graph(sc), 0);
    if (node >= st.graph.node_count()) throw f2f::Error(f2f::ErrorCode::kDomain, "node out of range");
    if (tree >= st.trees.gamma()) throw f2f::Error(f2f::ErrorCode::kDomain, "tree out of range");
    const auto v = static_cast<f2f::NodeId>(node);
    const auto& x = st.embedding.coords[tree][v];
    std::vector<f2f::Word128> next;
    for (auto c : st.trees.trees[tree].children[v]) next.push_back(st.embedding.coords[tree][c][x.size()]);
    std::mt19937_64 rng(f2f::mix_seed(st.seed, 0x61646472ULL + node));
    f2f::AddressKeys keys{f2f::Word128::random(rng, sc.embedding.bits), {}};
    const auto seed_s = f2f::Word128::random(rng, sc.embedding.bits);
    const auto seed_pad = f2f::Word128::random(rng, sc.embedding.bits);
    auto addr = f2f::generate_rp(x, keys, next, seed_s, seed_pad, sc.embedding, static_cast<int>(tree));
    auto bytes = f2f::address_to_bytes(addr, sc.embedding.bits);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw f2f::Error(f2f::ErrorCode::kIo, std::string("cannot write ") + path);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  });
}

}  // extern "C"
