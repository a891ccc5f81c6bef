#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "f2f/f2f.h"

namespace {

std::string tmp(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(CApi, NullArguments) {
  EXPECT_EQ(f2f_graph_load(nullptr, nullptr), F2F_ERR_NULL_ARGUMENT);
  EXPECT_STRNE(f2f_last_error_message(), "");
  EXPECT_EQ(f2f_scenario_run(nullptr, nullptr), F2F_ERR_NULL_ARGUMENT);
  EXPECT_EQ(f2f_graph_node_count(nullptr), 0u);
  f2f_graph_free(nullptr);
  f2f_result_free(nullptr);
  f2f_scenario_free(nullptr);
}

TEST(CApi, ErrorCodesMapped) {
  f2f_graph* g = nullptr;
  EXPECT_EQ(f2f_graph_load("/nonexistent/edges.txt", &g), F2F_ERR_IO);
  EXPECT_EQ(f2f_graph_generate("xx", 10, 1, 1, &g), F2F_ERR_PARSE);
  EXPECT_EQ(f2f_graph_generate("er", 200, 0.0001, 1, &g), F2F_ERR_GENERATION);
  EXPECT_STREQ(f2f_status_name(F2F_OK), "ok");
  f2f_scenario* s = nullptr;
  ASSERT_EQ(f2f_scenario_create(&s), F2F_OK);
  EXPECT_EQ(f2f_scenario_set(s, "nope", "1"), F2F_ERR_PARSE);
  EXPECT_EQ(f2f_scenario_set(s, "gamma", "many"), F2F_ERR_PARSE);
  // ranges are checked when the scenario runs
  ASSERT_EQ(f2f_scenario_set(s, "failure-fraction", "0.9"), F2F_OK);
  f2f_result* r = nullptr;
  EXPECT_EQ(f2f_scenario_run(s, &r), F2F_ERR_VALIDATION);
  EXPECT_EQ(r, nullptr);
  f2f_scenario_free(s);
}

TEST(CApi, GraphLifecycle) {
  f2f_graph* g = nullptr;
  ASSERT_EQ(f2f_graph_generate("pa", 500, 3, 2, &g), F2F_OK);
  EXPECT_EQ(f2f_graph_node_count(g), 500u);
  f2f_graph_stats st;
  ASSERT_EQ(f2f_graph_stats_get(g, &st), F2F_OK);
  EXPECT_EQ(st.giant_component_size, 500u);
  auto path = tmp("f2f_capi_stats.csv");
  ASSERT_EQ(f2f_graph_stats_write_csv(g, path.c_str()), F2F_OK);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "n,m,giant,diameter,mean_degree");
  f2f_graph* gc = nullptr;
  ASSERT_EQ(f2f_graph_giant_component(g, &gc), F2F_OK);
  EXPECT_EQ(f2f_graph_edge_count(gc), f2f_graph_edge_count(g));
  f2f_graph_free(gc);
  f2f_graph_free(g);
  std::filesystem::remove(path);
}

TEST(CApi, ScenarioRunAndResults) {
  f2f_scenario* s = nullptr;
  ASSERT_EQ(f2f_scenario_create(&s), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "graph", "pa:200:3"), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "runs", "3"), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "pairs", "100"), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "label", "capi"), F2F_OK);
  int logged = 0;
  f2f_set_log_callback([](const char*, void* u) { ++*static_cast<int*>(u); }, &logged);
  f2f_result* r = nullptr;
  ASSERT_EQ(f2f_scenario_run(s, &r), F2F_OK) << f2f_last_error_message();
  f2f_set_log_callback(nullptr, nullptr);
  EXPECT_GE(logged, 3);
  ASSERT_EQ(f2f_result_row_count(r), 2u);
  f2f_metric_row row;
  ASSERT_EQ(f2f_result_row(r, 1, &row), F2F_OK);
  EXPECT_STREQ(row.scenario, "capi");
  EXPECT_STREQ(row.metric, "success_ratio");
  EXPECT_DOUBLE_EQ(row.mean, 1.0);
  EXPECT_EQ(f2f_result_row(r, 9, &row), F2F_ERR_DOMAIN);

  f2f_graph* g = nullptr;
  ASSERT_EQ(f2f_graph_from_source("pa:200:3", 1, &g), F2F_OK);
  f2f_result* r2 = nullptr;
  ASSERT_EQ(f2f_scenario_run_on(s, g, &r2), F2F_OK);
  f2f_result* all = nullptr;
  ASSERT_EQ(f2f_result_create(&all), F2F_OK);
  ASSERT_EQ(f2f_result_append(all, r), F2F_OK);
  ASSERT_EQ(f2f_result_append(all, r2), F2F_OK);
  EXPECT_EQ(f2f_result_row_count(all), 4u);
  EXPECT_EQ(f2f_result_row_count(r), 0u);
  auto path = tmp("f2f_capi_rows.csv");
  ASSERT_EQ(f2f_result_write_csv(all, path.c_str()), F2F_OK);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  f2f_result_free(all);
  f2f_result_free(r);
  f2f_result_free(r2);
  f2f_graph_free(g);
  f2f_scenario_free(s);
}

TEST(CApi, DumpAndExport) {
  f2f_scenario* s = nullptr;
  ASSERT_EQ(f2f_scenario_create(&s), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "graph", "pa:50:2"), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "gamma", "2"), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "bits", "64"), F2F_OK);
  ASSERT_EQ(f2f_scenario_set(s, "length", "16"), F2F_OK);
  auto trees = tmp("f2f_capi_trees.txt"), addr = tmp("f2f_capi_addr.bin");
  ASSERT_EQ(f2f_trees_dump(s, trees.c_str()), F2F_OK);
  std::ifstream f(trees);
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) ++lines;
  EXPECT_EQ(lines, 1 + 2 * 50);
  ASSERT_EQ(f2f_address_export(s, 7, 1, addr.c_str()), F2F_OK) << f2f_last_error_message();
  EXPECT_EQ(std::filesystem::file_size(addr), (16u + 2u) * 8u);
  EXPECT_EQ(f2f_address_export(s, 999, 0, addr.c_str()), F2F_ERR_DOMAIN);
  std::filesystem::remove(trees);
  std::filesystem::remove(addr);
  f2f_scenario_free(s);
}
