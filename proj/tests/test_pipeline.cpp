#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "terra/analysis.hpp"
#include "terra/engine.hpp"
#include "terra/report.hpp"

using namespace terra;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("tl-pipe-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig reduced(Preset preset, uint64_t seed) {
  RunConfig cfg = preset_config(preset);
  cfg.grid.width = 20;
  cfg.grid.height = 20;
  cfg.grid.initial_food_items = std::min(cfg.grid.initial_food_items, 60);
  cfg.grid.food_spawn_rate = std::min(cfg.grid.food_spawn_rate, 4.0);
  cfg.n_agents = 10;
  cfg.max_steps = 100;
  cfg.seed = seed;
  return cfg;
}

int count_lines(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("offline pipeline round-trips for every preset at reduced scale") {
  std::vector<fs::path> analyzed;
  for (const std::string& name : preset_names()) {
    fs::path dir = fresh_dir("preset-" + name);
    RunConfig cfg = reduced(preset_from_string(name), 5);
    auto policy = make_policy("scribe");
    fs::path run_dir = dir / "run-5";
    run(cfg, *policy, run_dir, "run-5");

    AnalyzeOptions options;  // mock judge, trigram provider, no network
    run_stage("graph", run_dir, options);
    run_stage("behavior", run_dir, options);
    run_stage("phylo", run_dir, options);
    run_stage("text", run_dir, options);

    for (const char* file :
         {"analysis/edges.txt", "analysis/communities.txt",
          "analysis/graph_metrics.json", "analysis/annotations.jsonl",
          "analysis/novelty.jsonl", "analysis/ancestry.jsonl",
          "analysis/categories.jsonl", "analysis/phylo.json",
          "analysis/complexity.jsonl"})
      CHECK_MESSAGE(fs::exists(run_dir / file), name, ": missing ", file);
    analyzed.push_back(run_dir);
  }

  ReportBundle bundle = build_report(analyzed);
  CHECK(bundle.tables.size() == 10);
  fs::path out_csv = fresh_dir("report-csv");
  fs::path out_jsonl = fresh_dir("report-jsonl");
  write_report(bundle, out_csv, "csv");
  write_report(bundle, out_jsonl, "jsonl");
  for (const Table& t : bundle.tables) {
    CHECK(fs::exists(out_csv / (t.name + ".csv")));
    CHECK(fs::exists(out_jsonl / (t.name + ".jsonl")));
    // csv has a header line; jsonl one line per row
    CHECK(count_lines(out_csv / (t.name + ".csv")) ==
          static_cast<int>(t.rows.size()) + 1);
    CHECK(count_lines(out_jsonl / (t.name + ".jsonl")) ==
          static_cast<int>(t.rows.size()));
  }
}

TEST_CASE("csv and jsonl report formats carry identical values") {
  Table t;
  t.name = "check";
  t.columns = {"a", "b", "c"};
  t.rows = {{1, "x,y", 2.5}, {2, "quote\"inside", nlohmann::json()}};
  std::string csv = t.to_csv();
  CHECK(csv.find("\"x,y\"") != std::string::npos);
  CHECK(csv.find("\"quote\"\"inside\"") != std::string::npos);
  std::string jsonl = t.to_jsonl();
  auto first = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
  CHECK(first["a"] == 1);
  CHECK(first["b"] == "x,y");
  CHECK(first["c"] == 2.5);
}

TEST_CASE("stage dependencies produce typed errors naming the prerequisite") {
  fs::path dir = fresh_dir("deps");
  RunConfig cfg = reduced(Preset::kCore, 8);
  cfg.max_steps = 30;
  auto policy = make_policy("forager");
  fs::path run_dir = dir / "run-8";
  run(cfg, *policy, run_dir, "run-8");

  AnalyzeOptions options;
  try {
    run_stage("behavior", run_dir, options);
    FAIL("behavior without graph must throw");
  } catch (const MissingDependency& e) {
    CHECK(std::string(e.what()).find("graph") != std::string::npos);
  }
  try {
    run_stage("phylo", run_dir, options);
    FAIL("phylo without ancestry must throw");
  } catch (const MissingDependency& e) {
    CHECK(std::string(e.what()).find("behavior") != std::string::npos);
  }
  CHECK_THROWS_AS(run_stage("bogus", run_dir, options), ConfigError);
}

TEST_CASE("report rejects mixed schema versions") {
  fs::path dir = fresh_dir("mixed");
  RunConfig cfg = reduced(Preset::kCore, 9);
  cfg.max_steps = 30;
  auto policy = make_policy("scribe");
  fs::path run_dir = dir / "run-9";
  run(cfg, *policy, run_dir, "run-9");
  AnalyzeOptions options;
  run_stage("graph", run_dir, options);
  run_stage("behavior", run_dir, options);
  run_stage("phylo", run_dir, options);
  run_stage("text", run_dir, options);

  // Corrupt the summary schema tag.
  fs::path summary = run_dir / "summary.json";
  json j;
  {
    std::ifstream in(summary);
    in >> j;
  }
  j["schema"] = "tl-summary/999";
  std::ofstream(summary) << j.dump(2);
  CHECK_THROWS_AS(build_report({run_dir}), LogError);
}

TEST_CASE("analysis outputs are reproducible for a fixed seed") {
  auto run_once = [](const std::string& tag) {
    fs::path dir = fresh_dir("repro-" + tag);
    RunConfig cfg = reduced(Preset::kCore, 12);
    auto policy = make_policy("scribe");
    fs::path run_dir = dir / "run-12";
    run(cfg, *policy, run_dir, "run-12");
    AnalyzeOptions options;
    options.seed = 4;
    run_stage("graph", run_dir, options);
    run_stage("behavior", run_dir, options);
    std::ifstream in(run_dir / "analysis" / "novelty.jsonl");
    std::string all, line;
    while (std::getline(in, line)) all += line + "\n";
    return all;
  };
  CHECK(run_once("a") == run_once("b"));
}

TEST_CASE("inert artifact runs keep artifacts out of sight but in the log") {
  fs::path dir = fresh_dir("inert");
  RunConfig cfg = reduced(Preset::kInertArtifacts, 21);
  auto policy = make_policy("scribe");
  fs::path run_dir = dir / "run-21";
  RunResult result = run(cfg, *policy, run_dir, "run-21");
  RunLog log = load_run(run_dir);
  CHECK(result.summary.total_artifacts > 0);
  CHECK(!log.artifacts.empty());
  for (const AgentRecord& r : log.records) {
    CHECK(r.obs_text.find("A(") == std::string::npos);
    CHECK(r.inventory.empty());
  }
}

TEST_CASE("http judge configuration is constructed without touching the network") {
  AnalyzeOptions options;
  options.judge_uri = "http://localhost:9";
  auto judge = make_judge(options);
  CHECK(judge->identity().find("annotator") != std::string::npos);
}
