#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "f2f/adversary.hpp"
#include "f2f/overlay.hpp"
#include "f2f/routing.hpp"

namespace f2f {

/// "pa:N:M", "er:N:P", or an edge-list path. The result is always the giant
/// component.
Graph load_graph_source(const std::string& source, std::uint64_t seed);

struct Scenario {
  std::string label = "scenario";
  std::string graph_source = "pa:5000:4";
  TreeConfig trees;
  RootPolicy root_policy = RootPolicy::kMaxDegree;
  NodeId fixed_root = kNoNode;
  EmbeddingConfig embedding;
  RoutingConfig routing;
  std::optional<DhtConfig> dht;
  AdversaryConfig adversary;
  std::size_t pairs = 10000;
  std::size_t runs = 20;
  std::uint64_t master_seed = 1;
  std::size_t stabilization_samples = 0;
  std::size_t dht_lookups = 0;  // 0 means use `pairs`
  unsigned threads = 1;

  void validate() const;
};

struct MetricRow {
  std::string scenario;
  std::string metric;
  double mean = 0.0;
  double ci95 = 0.0;
  std::size_t runs = 0;
};

/// Graph, trees and embedding of one run, with the attack and failures applied.
struct RunState {
  Graph graph;
  NodeId attacker = kNoNode;
  TreeSet trees;
  Embedding embedding;
  LiveMask live;
  std::uint64_t seed = 0;
};

RunState prepare_run(const Scenario& s, const Graph& base, std::size_t run);

/// Per-run values of every metric collected in one run.
struct RunMetrics {
  std::optional<double> routing_length;
  double success_ratio = 0.0;
  std::optional<double> stabilization_cost;
  std::optional<double> dht_underlay_hops;
};

/// Sets one field from its text form, e.g. ("gamma", "5") or ("strategy", "div-dep").
/// Unknown keys and malformed values throw kParse or kValidation.
void set_scenario_option(Scenario& s, const std::string& key, const std::string& value);

/// Applies "key = value" lines; blank lines and '#' comments are skipped.
void load_scenario_config(Scenario& s, const std::filesystem::path& path);

using ProgressFn = std::function<void(const std::string&)>;

/// Builds everything for run `run` of the scenario on a prepared base graph
/// and measures it.
RunMetrics run_once(const Scenario& s, const Graph& base, std::size_t run);

/// Runs every run (in parallel if s.threads > 1) and aggregates with 95%
/// Student-t intervals over the per-run means.
std::vector<MetricRow> run_scenario(const Scenario& s, const ProgressFn& progress = {});
std::vector<MetricRow> run_scenario_on(const Scenario& s, const Graph& base, const ProgressFn& progress = {});

/// Mean descendant count over `samples` uniformly drawn non-root departures,
/// each applied to a fresh copy of the tree set.
double stabilization_metric(const TreeSet& ts, const Graph& g, std::size_t samples, std::uint64_t seed);

/// Half-width of the 95% interval for the mean of `values`; 0 for fewer than two.
double ci95_halfwidth(const std::vector<double>& values);

std::vector<MetricRow> aggregate(const std::string& label, const std::vector<RunMetrics>& runs);

void write_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path);
std::string csv_text(const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_csv(const std::filesystem::path& path);

/// One scenario per (gamma, strategy, metric), labelled "g<gamma>-<strategy>-<metric>".
std::vector<Scenario> sweep_scenarios(const Scenario& base, const std::vector<int>& gammas,
                                      const std::vector<TreeStrategy>& strategies, const std::vector<Metric>& metrics);

}  // namespace f2f
