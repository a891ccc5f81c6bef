// Command-line front end; talks to the library only through f2f.h.
#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "f2f/f2f.h"

namespace {

int report(f2f_status st) {
  std::fprintf(stderr, "f2fsim: %s: %s\n", f2f_status_name(st), f2f_last_error_message());
  return st == F2F_ERR_IO ? 3 : 2;
}

void log_to_stderr(const char* msg, void*) { std::fprintf(stderr, "[f2fsim] %s\n", msg); }

struct Options {
  std::string config;
  std::string out;
  std::map<std::string, std::string> values;  // scenario key -> value given on the command line
};

void add_scenario_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "key = value file; flags override it");
  static const std::vector<std::pair<std::string, std::string>> flags = {
      {"graph", "edge-list path or pa:N:M / er:N:P"},
      {"gamma", "number of trees"},
      {"q", "acceptance probability"},
      {"strategy", "div-rand | div-dep | bfs"},
      {"metric", "td | cpl"},
      {"tau", "trees used per route"},
      {"mode", "none | failures | att-rand | att-root"},
      {"attacker-edges", "attacker degree"},
      {"failure-fraction", "fraction of failed nodes in [0,0.5]"},
      {"pairs", "routing pairs per run"},
      {"runs", "independent runs"},
      {"seed", "master seed"},
      {"label", "scenario label in the CSV"},
      {"addressing", "coordinate | rp | ppp"},
      {"root-policy", "random | max-degree | fixed:<id>"},
      {"embedding-choice", "random-tau | min-neighbor-distance"},
      {"backtracking", "true | false"},
      {"bits", "bits per coordinate element"},
      {"length", "padded address length"},
      {"dht", "run DHT lookups (true | false)"},
      {"bucket-size", "Kademlia bucket size"},
      {"alpha", "parallel lookup walks"},
      {"dht-lookups", "lookups per run"},
      {"stabilization-samples", "departures sampled per run"},
      {"threads", "worker threads for runs"},
  };
  for (const auto& [key, help] : flags) {
    auto k = key;
    cmd->add_option_function<std::string>("--" + k, [&o, k](const std::string& v) { o.values[k] = v; }, help);
  }
}

f2f_status build_scenario(const Options& o, f2f_scenario** out) {
  f2f_status st = f2f_scenario_create(out);
  if (st != F2F_OK) return st;
  if (!o.config.empty() && (st = f2f_scenario_load_config(*out, o.config.c_str())) != F2F_OK) return st;
  for (const auto& [k, v] : o.values)
    if ((st = f2f_scenario_set(*out, k.c_str(), v.c_str())) != F2F_OK) return st;
  return F2F_OK;
}

int emit(f2f_result* r, const std::string& out) {
  f2f_status st = F2F_OK;
  if (!out.empty()) {
    st = f2f_result_write_csv(r, out.c_str());
  } else {
    std::printf("scenario,metric,mean,ci95,runs\n");
    for (uint64_t i = 0; i < f2f_result_row_count(r); ++i) {
      f2f_metric_row row;
      f2f_result_row(r, i, &row);
      std::printf("%s,%s,%.17g,%.17g,%llu\n", row.scenario, row.metric, row.mean, row.ci95,
                  static_cast<unsigned long long>(row.runs));
    }
  }
  f2f_result_free(r);
  return st == F2F_OK ? 0 : report(st);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Friend-to-friend overlay routing simulator"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "no progress output");

  Options run_opts, sweep_opts, dump_opts, addr_opts;
  auto* run = app.add_subcommand("run", "run one scenario and write metric rows");
  add_scenario_flags(run, run_opts);
  run->add_option("--out", run_opts.out, "CSV output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "run the scenario for every gamma x strategy x metric");
  add_scenario_flags(sweep, sweep_opts);
  sweep->add_option("--out", sweep_opts.out, "CSV output path (default stdout)");
  std::string gammas = "1,5,15", strategies = "bfs,div-dep,div-rand", metrics = "td,cpl";
  sweep->add_option("--gammas", gammas, "comma-separated gamma values");
  sweep->add_option("--strategies", strategies, "comma-separated strategies");
  sweep->add_option("--metrics", metrics, "comma-separated metrics");

  auto* stats = app.add_subcommand("stats", "print graph statistics as CSV");
  std::string stats_graph, stats_out;
  std::uint64_t stats_seed = 1;
  stats->add_option("--graph", stats_graph, "edge-list path or pa:N:M / er:N:P")->required();
  stats->add_option("--seed", stats_seed, "seed for synthetic graphs");
  stats->add_option("--out", stats_out, "CSV output path (default stdout)");

  auto* dump = app.add_subcommand("dump-trees", "write the trees of the first run");
  add_scenario_flags(dump, dump_opts);
  dump->add_option("--out", dump_opts.out, "output path")->required();

  auto* addr = app.add_subcommand("export-address", "write one binary return address");
  add_scenario_flags(addr, addr_opts);
  std::uint64_t node = 0, tree = 0;
  addr->add_option("--node", node, "issuing node")->required();
  addr->add_option("--tree", tree, "tree index");
  addr->add_option("--out", addr_opts.out, "output path")->required();

  CLI11_PARSE(app, argc, argv);
  if (!quiet) f2f_set_log_callback(log_to_stderr, nullptr);

  if (*stats) {
    f2f_graph* g = nullptr;
    f2f_status st = f2f_graph_from_source(stats_graph.c_str(), stats_seed, &g);
    if (st != F2F_OK) return report(st);
    if (!stats_out.empty()) {
      st = f2f_graph_stats_write_csv(g, stats_out.c_str());
    } else {
      f2f_graph_stats s;
      st = f2f_graph_stats_get(g, &s);
      if (st == F2F_OK)
        std::printf("n,m,giant,diameter,mean_degree\n%llu,%llu,%llu,%d,%.17g\n",
                    static_cast<unsigned long long>(s.node_count), static_cast<unsigned long long>(s.edge_count),
                    static_cast<unsigned long long>(s.giant_component_size), s.diameter_estimate, s.average_degree);
    }
    f2f_graph_free(g);
    return st == F2F_OK ? 0 : report(st);
  }

  if (*run) {
    f2f_scenario* s = nullptr;
    f2f_status st = build_scenario(run_opts, &s);
    f2f_result* r = nullptr;
    if (st == F2F_OK) st = f2f_scenario_run(s, &r);
    f2f_scenario_free(s);
    if (st != F2F_OK) return report(st);
    return emit(r, run_opts.out);
  }

  if (*sweep) {
    f2f_result* all = nullptr;
    f2f_result_create(&all);
    f2f_graph* g = nullptr;
    f2f_scenario* base = nullptr;
    f2f_status st = build_scenario(sweep_opts, &base);
    std::string label = "sweep";
    if (auto it = sweep_opts.values.find("label"); it != sweep_opts.values.end()) label = it->second;
    for (const auto& gm : split_list(gammas)) {
      for (const auto& sg : split_list(strategies)) {
        for (const auto& mt : split_list(metrics)) {
          if (st != F2F_OK) break;
          f2f_scenario* s = nullptr;
          st = build_scenario(sweep_opts, &s);
          const std::string lbl = label + "-g" + gm + "-" + sg + "-" + mt;
          if (st == F2F_OK) st = f2f_scenario_set(s, "gamma", gm.c_str());
          if (st == F2F_OK) st = f2f_scenario_set(s, "strategy", sg.c_str());
          if (st == F2F_OK) st = f2f_scenario_set(s, "metric", mt.c_str());
          if (st == F2F_OK) st = f2f_scenario_set(s, "label", lbl.c_str());
          if (st == F2F_OK && !g) {
            // the graph is shared by every sweep point
            auto gs = sweep_opts.values.count("graph") ? sweep_opts.values.at("graph") : std::string("pa:5000:4");
            auto seed = sweep_opts.values.count("seed") ? sweep_opts.values.at("seed") : std::string("1");
            st = f2f_graph_from_source(gs.c_str(), std::stoull(seed), &g);
          }
          f2f_result* r = nullptr;
          if (st == F2F_OK) st = f2f_scenario_run_on(s, g, &r);
          if (st == F2F_OK) st = f2f_result_append(all, r);
          f2f_result_free(r);
          f2f_scenario_free(s);
        }
      }
    }
    f2f_scenario_free(base);
    f2f_graph_free(g);
    if (st != F2F_OK) {
      f2f_result_free(all);
      return report(st);
    }
    return emit(all, sweep_opts.out);
  }

  if (*dump || *addr) {
    Options& o = *dump ? dump_opts : addr_opts;
    f2f_scenario* s = nullptr;
    f2f_status st = build_scenario(o, &s);
    if (st == F2F_OK)
      st = *dump ? f2f_trees_dump(s, o.out.c_str()) : f2f_address_export(s, node, tree, o.out.c_str());
    f2f_scenario_free(s);
    return st == F2F_OK ? 0 : report(st);
  }
  return 0;
}
