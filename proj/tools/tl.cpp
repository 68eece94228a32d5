// Operator CLI: run simulations, execute analysis stages, emit report tables.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "terra/analysis.hpp"
#include "terra/engine.hpp"
#include "terra/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitDependency = 4;
constexpr int kExitJudge = 5;

struct RunArgs {
  std::string config_path;
  std::string preset = "core";
  uint64_t seed = 1;
  int seeds = 1;
  std::string policy = "forager";
  std::string out_dir;
  std::string policy_url;
  std::string policy_model;
  bool archive_llm = false;
  int max_steps = -1;
  int n_agents = -1;
  int history_len = -1;
  double artifact_cost = -1.0;
  int lifespan = -1;
  double initial_energy = -1.0;
};

int cmd_run(const RunArgs& args) {
  terra::RunConfig config;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) {
      std::cerr << "error: cannot read config " << args.config_path << "\n";
      return kExitConfig;
    }
    terra::json j;
    in >> j;
    config = terra::RunConfig::from_json(j);
  } else {
    config = terra::preset_config(args.preset);
  }
  if (args.max_steps > 0) config.max_steps = args.max_steps;
  if (args.n_agents > 0) config.n_agents = args.n_agents;
  if (args.history_len > 0) config.history_len = args.history_len;
  if (args.artifact_cost >= 0.0) config.artifact_cost = args.artifact_cost;
  if (args.lifespan > 0) config.lifespan = args.lifespan;
  if (args.initial_energy > 0) config.initial_energy = args.initial_energy;

  terra::RemotePolicyConfig remote;
  remote.base_url = args.policy_url;
  remote.model = args.policy_model;
  remote.archive = args.archive_llm;

  for (int k = 0; k < args.seeds; ++k) {
    config.seed = args.seed + static_cast<uint64_t>(k);
    std::string run_id = "run-" + std::to_string(config.seed);
    fs::path dir = fs::path(args.out_dir) / run_id;
    if (args.archive_llm) remote.archive_dir = (dir / "llm_archive").string();
    auto policy = terra::make_policy(args.policy,
                                     args.policy == "remote" ? &remote : nullptr);
    terra::RunResult result = terra::run(config, *policy, dir, run_id);
    const terra::RunSummary& s = result.summary;
    std::cout << run_id << ": longevity=" << s.longevity
              << " artifacts=" << s.total_artifacts
              << " artifacts/agent=" << s.artifacts_per_agent
              << " mean_population=" << s.mean_population << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic agent-ecology simulator and analysis pipeline"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "execute one or more simulation runs");
  run->add_option("--config", run_args.config_path, "JSON config file");
  run->add_option("--preset", run_args.preset, "condition preset")
      ->check(CLI::IsMember(terra::preset_names()));
  run->add_option("--seed", run_args.seed, "base RNG seed");
  run->add_option("--seeds", run_args.seeds, "number of consecutive seeds")
      ->check(CLI::PositiveNumber);
  run->add_option("--policy", run_args.policy, "forager|sharer|scribe|random|remote");
  run->add_option("--out", run_args.out_dir, "output directory")->required();
  run->add_option("--policy-url", run_args.policy_url,
                  "chat endpoint for --policy remote");
  run->add_option("--policy-model", run_args.policy_model,
                  "model name for --policy remote");
  run->add_flag("--archive-llm", run_args.archive_llm, "archive prompts and replies");
  run->add_option("--max-steps", run_args.max_steps, "override max steps");
  run->add_option("--n-agents", run_args.n_agents, "override initial population");
  run->add_option("--history-len", run_args.history_len, "override history window");
  run->add_option("--artifact-cost", run_args.artifact_cost, "override artifact cost");
  run->add_option("--lifespan", run_args.lifespan, "override lifespan");
  run->add_option("--initial-energy", run_args.initial_energy,
                  "override initial energy");

  std::string analyze_dir, stage;
  terra::AnalyzeOptions analyze_options;
  std::string idf_file, parses_file;
  CLI::App* analyze =
      app.add_subcommand("analyze", "run one analysis stage on a run dir");
  analyze->add_option("dir", analyze_dir, "run directory")->required();
  analyze->add_option("--stage", stage, "graph|behavior|phylo|text")
      ->required()
      ->check(CLI::IsMember({"graph", "behavior", "phylo", "text"}));
  analyze->add_option("--judge", analyze_options.judge_uri,
                      "mock or an OpenAI-compatible base URL");
  analyze->add_option("--judge-annotation-model", analyze_options.annotation_model,
                      "model for annotation/audit/novelty");
  analyze->add_option("--judge-classification-model",
                      analyze_options.classification_model,
                      "model for classification/ancestry");
  analyze->add_option("--seed", analyze_options.seed, "analysis RNG seed");
  analyze->add_option("--samples", analyze_options.novelty_samples,
                      "novelty samples per artifact");
  analyze->add_option("--logprob", analyze_options.logprob_uri,
                      "trigram: | uniform:<k> | http(s) endpoint");
  analyze->add_option("--idf", idf_file, "IDF table file (term<TAB>idf)");
  analyze->add_option("--parses", parses_file, "dependency parse sidecar");
  analyze->add_flag("--archive", analyze_options.archive, "archive judge traffic");

  std::vector<std::string> report_dirs;
  std::string report_format = "csv", report_out = "report";
  CLI::App* report =
      app.add_subcommand("report", "aggregate analyzed runs into tables");
  report->add_option("dirs", report_dirs, "analyzed run directories")->required();
  report->add_option("--format", report_format, "csv|jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (analyze->parsed()) {
      if (!idf_file.empty()) analyze_options.idf_file = idf_file;
      if (!parses_file.empty()) analyze_options.parses_file = parses_file;
      terra::run_stage(stage, analyze_dir, analyze_options);
      std::cout << "stage " << stage << " complete for " << analyze_dir << "\n";
      return kExitOk;
    }
    if (report->parsed()) {
      std::vector<fs::path> dirs(report_dirs.begin(), report_dirs.end());
      terra::ReportBundle bundle = terra::build_report(dirs);
      terra::write_report(bundle, report_out, report_format);
      std::cout << "wrote " << bundle.tables.size() << " tables to " << report_out
                << "\n";
      return kExitOk;
    }
  } catch (const terra::MissingDependency& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDependency;
  } catch (const terra::JudgeFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitJudge;
  } catch (const terra::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
