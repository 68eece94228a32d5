// Timestep loop, condition presets, seeding, log emission.
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "terra/logio.hpp"
#include "terra/minds.hpp"

namespace terra {

enum class Preset {
  kCore,
  kLongHistory,
  kNoPersonality,
  kNoMotivation,
  kCreative,
  kArtifactCost,
  kInertArtifacts,
  kAbundant,
};

std::string to_string(Preset p);
Preset preset_from_string(const std::string& name);
std::vector<std::string> preset_names();

struct RunConfig {
  Preset preset = Preset::kCore;
  GridConfig grid;
  int n_agents = 20;
  double initial_energy = 50.0;
  int lifespan = 100;
  int max_steps = 3000;
  double reproduce_cost = 50.0;
  double artifact_cost = 0.0;
  int history_len = 1;
  prompts::Motivation motivation = prompts::Motivation::kMinimal;
  bool personality = true;
  bool inert_artifacts = false;
  MutationConfig mutation;
  int payload_cap = 500;
  int memory_soft = 150;
  int memory_hard = 250;
  uint64_t seed = 1;
  bool check_invariants = false;

  json to_json() const;
  static RunConfig from_json(const json& j);
  ActRules act_rules() const;
};

// Table of experimental conditions. Food regimes are engine parameters the
// conditions pin: scarce = clustered low-rate, abundant = uniform high-rate
// (rates frozen after a one-off forager survival calibration).
RunConfig preset_config(Preset preset);
RunConfig preset_config(const std::string& name);

struct RunSummary {
  std::string run_id;
  uint64_t seed = 0;
  std::string preset;
  int longevity = 0;        // step index at extinction, or max_steps
  int steps_executed = 0;   // steps with at least one acting agent
  int total_artifacts = 0;  // creations over the whole run
  int agents_ever = 0;
  double artifacts_per_agent = 0.0;
  double mean_population = 0.0;

  json to_json() const;
};

struct RunResult {
  RunSummary summary;
  World final_world;
};

// Executes one run. When out_dir is set, writes log.jsonl, events.jsonl,
// artifacts.jsonl, summary.json and config.json there.
RunResult run(const RunConfig& config, Policy& policy,
              const std::optional<std::filesystem::path>& out_dir,
              const std::string& run_id);

// Per-run and aggregate longevity / artifact statistics across K runs.
struct ConditionSummary {
  std::vector<RunSummary> runs;
  double mean_longevity = 0, q1_longevity = 0, q3_longevity = 0;
  double mean_total_artifacts = 0, q1_total_artifacts = 0, q3_total_artifacts = 0;
  double mean_artifacts_per_agent = 0, q1_artifacts_per_agent = 0,
         q3_artifacts_per_agent = 0;
  double mean_population = 0, q1_population = 0, q3_population = 0;
};

ConditionSummary summarize(const std::vector<RunSummary>& runs);

// Linear-interpolation quantile over a sorted copy of xs ((n-1)*q rule).
double quantile(std::vector<double> xs, double q);

// Rebuilds the final world from a written log; used to verify replayability.
World replay_final_world(const RunLog& log, const RunConfig& config);

}  // namespace terra
