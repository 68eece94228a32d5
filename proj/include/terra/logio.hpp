// Run log schema: JSON Lines writers and loaders. The log is the only
// contract between the engine and the analysis side.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "terra/acts.hpp"
#include "terra/minds.hpp"

namespace terra {

inline constexpr const char* kLogSchema = "tl-log/1";
inline constexpr const char* kEventsSchema = "tl-events/1";
inline constexpr const char* kArtifactsSchema = "tl-artifacts/1";
inline constexpr const char* kSummarySchema = "tl-summary/1";

class LogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgentRecord {
  int t = 0;
  std::string id;
  std::string name;
  std::string action_kind;  // canonical
  json params;
  std::string status;  // applied | rejected
  std::optional<std::string> reason;
  std::string message;
  std::string memory_after;
  std::string rationale;
  // observation at decision time
  std::string obs_text;
  std::vector<std::string> visible_agents;
  std::vector<IncomingMessage> inbox;
  double energy = 0.0;  // post-vitals, pre-action
  int time_left = 0;
  std::vector<std::string> inventory;
  // post-action
  Position pos;
  double energy_after = 0.0;
  double food_eaten = 0.0;
  double transfer_amount = 0.0;
  std::optional<std::string> transfer_target;
  json events = json::array();  // births/artifact ops caused by this action

  json to_json() const;
  static AgentRecord from_json(const json& j);
};

struct StepMeta {
  int t = 0;
  std::vector<std::tuple<int, int, double>> food_spawned;
  std::vector<std::pair<int, int>> food_decayed;

  json to_json() const;
  static StepMeta from_json(const json& j);
};

struct BirthEvent {
  int t = 0;
  std::string child, child_name, parent;
  Position pos;
  double energy = 0.0;
};
struct DeathEvent {
  int t = 0;
  std::string agent;
  std::string cause;  // starvation | age
};
struct ArtifactOpEvent {
  int t = 0;
  std::string op;  // create/pickup/drop/give/modify/destroy/expire
  std::string artifact_id, artifact_name, agent;
  std::optional<std::string> counterparty;
  std::string payload_hash;
};

struct ArtifactVersion {
  int t = 0;
  std::string payload;
  int lifespan = kInfiniteLifespan;
};

struct ArtifactRow {
  std::string id, name, creator;
  int created_at = 0;
  std::vector<int> modified_at;
  std::vector<ArtifactVersion> versions;
  const std::string& final_payload() const { return versions.back().payload; }
};

struct RunLog {
  json header;
  std::vector<StepMeta> steps;
  std::vector<AgentRecord> records;
  std::vector<BirthEvent> births;
  std::vector<DeathEvent> deaths;
  std::vector<ArtifactOpEvent> artifact_ops;
  std::vector<ArtifactRow> artifacts;

  int final_step() const { return steps.empty() ? 0 : steps.back().t; }
  std::map<std::string, std::string> id_to_name() const;
  const ArtifactRow* find_artifact(const std::string& id) const;
};

class RunWriter {
 public:
  RunWriter(const std::filesystem::path& dir, const json& header);
  void write_step(const StepMeta& step);
  void write_record(const AgentRecord& record);
  void write_birth(const BirthEvent& e);
  void write_death(const DeathEvent& e);
  void write_artifact_op(const ArtifactOpEvent& e);
  void write_artifact_row(const ArtifactRow& row);
  void write_summary(const json& summary);
  void flush();

 private:
  std::ofstream log_, events_, artifacts_, summary_;
  std::filesystem::path dir_;
};

RunLog load_run(const std::filesystem::path& dir);

std::string payload_hash(const std::string& payload);

// Appendix-style one-line rendering of a record, used as judge input and for
// verbatim snippet checks.
std::string render_log_line(const AgentRecord& r, bool include_timestep = true);

}  // namespace terra
