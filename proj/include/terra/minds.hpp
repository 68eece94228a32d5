// Policy layer: prompt assembly, reply parsing, scripted deterministic
// policies, remote chat-endpoint policy, message delivery.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "terra/acts.hpp"
#include "terra/prompts.hpp"
#include "terra/world.hpp"

namespace terra {

struct IncomingMessage {
  std::string sender;  // display name
  std::string text;
};

// One prior step as shown in the prompt history window. Numeric fields are
// captured preformatted so the block renders exactly as the agent saw it.
struct StepSummary {
  int t = 0;
  std::string energy_text;
  std::vector<IncomingMessage> inbox;
  std::string observation_text;
  std::string action_name;  // prompt spelling
  std::string params_py;    // python-dict style, as logged
  std::string message_sent;
  bool ate_food = false;
  double food_value = 0.0;
};

struct VisibleFood {
  int dx = 0, dy = 0;
  double value = 0.0;
};

struct VisibleNeighbor {
  std::string name;
  int dx = 0, dy = 0;
  double energy = 0.0;  // scripted policies only, never rendered into prompts
};

struct PromptContext {
  std::string agent_id;
  std::string agent_name;
  int t = 0;
  double energy = 0.0;
  int time_left = 0;
  std::optional<Genome> genome;
  std::string observation_text;
  std::vector<IncomingMessage> inbox;
  std::vector<StepSummary> history;  // oldest first, size <= history_len
  int history_len = 1;
  std::vector<std::pair<std::string, std::string>> inventory;  // name, payload
  std::string previous_memory;
  std::string additional_info;
  std::vector<ActionKind> afforded;  // canonical order
  prompts::Motivation motivation = prompts::Motivation::kMinimal;
  bool personality = true;
  bool inert_artifacts = false;
  int memory_soft = 150;
  int memory_hard = 250;
  int payload_cap = 500;
  double reproduce_cost = 50.0;
  double artifact_cost = 0.0;
  // Structured views for scripted policies.
  std::vector<VisibleFood> visible_food;
  std::vector<VisibleNeighbor> visible_neighbors;
  std::vector<std::string> artifacts_here;  // names at own cell
};

struct PolicyDecision {
  ActionRequest request;  // request.agent filled by the engine
  std::string message;
  std::string new_memory;
  std::string rationale;  // scripted policies: decision reason, archived in logs
};

struct ParseFailure {
  std::string raw;
  std::string error;
};

struct PromptPair {
  std::string system_text;
  std::string user_text;
};

// Renders a python-style dict (single-quoted strings) from action params.
std::string params_python_repr(const json& params);

// The "Available Actions & Params" object for the afforded subset.
std::string render_actions_json(const std::vector<ActionKind>& afforded,
                                double reproduce_cost, int payload_cap);

PromptPair assemble_prompts(const PromptContext& ctx);

std::variant<PolicyDecision, ParseFailure> parse_reply(const std::string& text);

// Canonical reply text for a decision; parse_reply(render_reply(d)) == d.
std::string render_reply(const PolicyDecision& d);

struct Broadcast {
  std::string sender_id;
  std::string sender_name;
  Position sender_pos;
  std::string text;
};

// A message reaches every living agent within the sender's perception radius
// of the captured send position. Inboxes sort by (sender, text).
std::map<std::string, std::vector<IncomingMessage>> deliver_messages(
    const std::vector<Broadcast>& broadcasts, const World& world);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual PolicyDecision decide(const PromptContext& ctx, Rng& rng) = 0;
};

struct RemotePolicyConfig {
  std::string base_url;
  std::string model;
  std::string api_key_env = "TL_POLICY_KEY";
  bool archive = false;
  std::string archive_dir;
};

// "forager", "sharer", "scribe", "random", or "remote" (with config).
std::unique_ptr<Policy> make_policy(const std::string& name,
                                    const RemotePolicyConfig* remote = nullptr);

}  // namespace terra
