#include "terra/minds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "terra/llm.hpp"

namespace terra {

namespace {

std::string py_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  out += "'";
  return out;
}

std::string py_value(const json& v) {
  if (v.is_string()) return py_quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "True" : "False";
  if (v.is_null()) return "None";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt_number_py(v.get<double>());
  return v.dump();
}

}  // namespace

std::string params_python_repr(const json& params) {
  std::string out = "{";
  bool first = true;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!first) out += ", ";
    first = false;
    out += py_quote(it.key()) + ": " + py_value(it.value());
  }
  out += "}";
  return out;
}

namespace {

nlohmann::ordered_json action_schema(ActionKind kind, double reproduce_cost,
                                     int payload_cap) {
  using prompts::replace_all;
  nlohmann::ordered_json schema;
  std::string cost = fmt_number(reproduce_cost);
  std::string cap = std::to_string(payload_cap);
  switch (kind) {
    case ActionKind::kMove:
      schema["description"] =
          "Move of one cell in the specified direction, or stay in the current "
          "position";
      schema["params"] = {{"direction", "One among [right, left, up, down, stay]."}};
      break;
    case ActionKind::kGiveEnergy:
      schema["description"] = "Transfer some of your energy to another nearby being.";
      schema["params"] = {
          {"target", "Name of a being in your field of view to give energy to."},
          {"amount",
           "Integer amount of energy to transfer (1 up to your current energy)."}};
      break;
    case ActionKind::kTakeEnergy:
      schema["description"] = "Steal energy from another nearby being.";
      schema["params"] = {
          {"target", "Name of a being in your field of view to steal energy from."},
          {"amount",
           "Integer amount of energy to steal (1 up to target's current energy)."}};
      break;
    case ActionKind::kReproduce:
      schema["description"] = replace_all(
          "Asexually generate an offspring. It costs {cost} energy.", "{cost}", cost);
      schema["params"] = {
          {"energy",
           replace_all("Integer amount of **additional** energy the parent gifts the "
                       "child (0 up to <parent_current_energy - {cost}>)",
                       "{cost}", cost)},
          {"name", "Name of the offspring (use **unique** names)"}};
      break;
    case ActionKind::kCreateArtifact:
      schema["description"] = "Creates a new artifact at the being's location.";
      schema["params"] = {
          {"name", "The name of the artifact (use **unique** names)"},
          {"type", "Type of the artifact to create. One among: ['text']"},
          {"payload",
           replace_all("Content of the artifact (e.g. a message, a code snippet, "
                       "etc.). It depends on the artifact type: {'text': 'Any "
                       "alfanumeric data stored in a physical marker. Maximum size "
                       "is {cap} tokens.'}",
                       "{cap}", cap)},
          {"lifespan",
           "How many time steps the artifact will last (in number of steps, integer "
           "> 0. If -1 the artifact will never disappear)"}};
      break;
    case ActionKind::kPickupArtifact:
      schema["description"] =
          "Pick up an artifact from your cell and store it in your inventory.";
      schema["params"] = {{"name", "Name of an artifact in your cell to pick up."}};
      break;
    case ActionKind::kDropArtifact:
      schema["description"] =
          "Drop an artifact from your inventory into your current cell.";
      schema["params"] = {{"name", "Name of an artifact in your inventory to drop."}};
      break;
    case ActionKind::kGiveArtifact:
      schema["description"] =
          "Give an artifact from your inventory to another nearby being.";
      schema["params"] = {
          {"artifact_name", "Name of an artifact in your inventory."},
          {"target_agent",
           "Name of a being in your field of view to receive the artifact."}};
      break;
    case ActionKind::kModifyArtifact:
      schema["description"] =
          "Replace the payload and lifespan of an artifact in your cell or "
          "inventory.";
      schema["params"] = {
          {"artifact_name",
           "Name of the artifact to modify. It must be in your inventory or in your "
           "cell."},
          {"payload", replace_all("New content of the artifact. Maximum size is "
                                  "{cap} tokens.",
                                  "{cap}", cap)},
          {"lifespan",
           "New artifact duration (in number of steps, integer > 0. If -1 the "
           "artifact will never disappear)"}};
      break;
    case ActionKind::kDestroyArtifact:
      schema["description"] =
          "Destroy an artifact in your cell or inventory. This cannot be undone.";
      schema["params"] = {
          {"artifact_name",
           "Name of the artifact to destroy. It must be in your inventory or in "
           "your cell."}};
      break;
  }
  return schema;
}

// Wire order of the actions object and the reply-footer key list.
constexpr ActionKind kPromptOrder[] = {
    ActionKind::kMove,           ActionKind::kGiveEnergy,
    ActionKind::kTakeEnergy,     ActionKind::kCreateArtifact,
    ActionKind::kReproduce,      ActionKind::kPickupArtifact,
    ActionKind::kDropArtifact,   ActionKind::kGiveArtifact,
    ActionKind::kModifyArtifact, ActionKind::kDestroyArtifact,
};

std::string indent_lines(const std::string& text, const std::string& pad) {
  if (text.empty()) return text;
  std::string out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    out += pad + text.substr(start, end - start);
    if (end < text.size()) out += '\n';
    start = end + 1;
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace

std::string render_actions_json(const std::vector<ActionKind>& afforded,
                                double reproduce_cost, int payload_cap) {
  nlohmann::ordered_json actions;
  for (ActionKind kind : kPromptOrder) {
    if (std::find(afforded.begin(), afforded.end(), kind) == afforded.end()) continue;
    actions[prompt_name(kind)] = action_schema(kind, reproduce_cost, payload_cap);
  }
  return actions.dump(4);
}

PromptPair assemble_prompts(const PromptContext& ctx) {
  prompts::SystemPromptArgs sys_args;
  sys_args.agent_name = ctx.agent_name;
  sys_args.memory_soft_tokens = ctx.memory_soft;
  sys_args.personality = ctx.personality && ctx.genome.has_value();
  sys_args.inert_artifacts = ctx.inert_artifacts;
  sys_args.motivation = ctx.motivation;
  std::string system_text = prompts::render_system_prompt(sys_args);

  std::string user;
  user += "=== History (last " + std::to_string(ctx.history_len) + " steps) ===\n";
  if (ctx.history.empty()) user += "<none>\n";
  for (const StepSummary& s : ctx.history) {
    user += "Step " + std::to_string(s.t) + ":\n";
    user += "  Energy: " + s.energy_text + "\n";
    if (s.inbox.empty()) {
      user += "  Incoming msgs: <none>\n";
    } else {
      user += "  Incoming msgs:\n";
      for (const IncomingMessage& m : s.inbox)
        user += "    " + m.sender + ": " + m.text + "\n";
    }
    user += "  Observation:\n";
    if (!s.observation_text.empty())
      user += indent_lines(s.observation_text, "    ") + "\n";
    user += " \n";
    user += "  Action taken: " + s.action_name + "\n";
    user += "  Action parameters: " + s.params_py + "\n";
    user += "  Sent message: " +
            (s.message_sent.empty() ? std::string("<none>") : s.message_sent) + "\n";
    user += "\n";
  }
  if (ctx.history.empty()) user += "\n";

  if (ctx.personality && ctx.genome) {
    const Genome& g = *ctx.genome;
    std::vector<prompts::TraitLine> lines;
    auto traits = g.personality();
    for (int i = 0; i < Genome::kPersonalityCount; ++i)
      lines.push_back({Genome::kTraitNames[i], *traits[i]});
    user += prompts::render_traits_block(lines, g.fertility);
    user += "\n\n";
  }

  user += "=== Current State ===\n";
  user += "Observation:\n";
  if (!ctx.observation_text.empty())
    user += indent_lines(ctx.observation_text, " ") + "\n";
  user += " \n\n";
  user += "Incoming messages:\n";
  if (ctx.inbox.empty()) {
    user += "<none>\n";
  } else {
    for (const IncomingMessage& m : ctx.inbox)
      user += m.sender + ": " + m.text + " \n";
  }
  user += "\n";
  user += "Energy: " + fmt_number_py(ctx.energy) + "\n";
  user += "Remaining time: " + std::to_string(ctx.time_left) + "\n\n";
  user += "Inventory:\n";
  if (ctx.inventory.empty()) {
    user += "<empty> \n";
  } else {
    for (const auto& [name, payload] : ctx.inventory)
      user += "- " + name + ": " + payload + "\n";
  }
  user += "\n";
  user += "Previous INTERNAL MEMORY:\n";
  user += (ctx.previous_memory.empty() ? std::string("<none>") : ctx.previous_memory) +
          "\n\n";
  if (!ctx.additional_info.empty()) user += ctx.additional_info + "\n\n";
  user += "=== Available Actions & Params ===\n";
  user += render_actions_json(ctx.afforded, ctx.reproduce_cost, ctx.payload_cap);
  user += "\n\n";

  std::string keys;
  for (ActionKind kind : kPromptOrder) {
    if (std::find(ctx.afforded.begin(), ctx.afforded.end(), kind) == ctx.afforded.end())
      continue;
    if (!keys.empty()) keys += ", ";
    keys += prompt_name(kind);
  }
  user += prompts::render_reply_footer(keys);
  return {std::move(system_text), std::move(user)};
}

namespace {

// First balanced top-level object literal, string-aware.
std::optional<std::string> extract_object(const std::string& text) {
  size_t search_from = 0;
  size_t fence = text.find("```");
  if (fence != std::string::npos) {
    size_t open = text.find('{', fence);
    if (open != std::string::npos) search_from = open;
  }
  size_t start = text.find('{', search_from);
  if (start == std::string::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}') {
      --depth;
      if (depth == 0) return text.substr(start, i - start + 1);
    }
  }
  return std::nullopt;
}

}  // namespace

std::variant<PolicyDecision, ParseFailure> parse_reply(const std::string& text) {
  auto literal = extract_object(text);
  if (!literal) return ParseFailure{text, "no object literal found"};
  json body = json::parse(*literal, nullptr, false);
  if (body.is_discarded()) return ParseFailure{text, "malformed JSON"};
  if (!body.is_object() || !body.contains("action") || !body.contains("params") ||
      !body.contains("internal_memory"))
    return ParseFailure{text, "missing required keys"};
  if (!body["action"].is_string())
    return ParseFailure{text, "action must be a string"};
  auto kind = action_kind_from_string(body["action"].get<std::string>());
  if (!kind) return ParseFailure{text, "unknown action kind"};
  if (!body["params"].is_object()) return ParseFailure{text, "params must be an object"};

  PolicyDecision d;
  d.request.kind = *kind;
  d.request.params = body["params"];
  if (body.contains("message") && body["message"].is_string())
    d.message = body["message"].get<std::string>();
  if (body["internal_memory"].is_string())
    d.new_memory = body["internal_memory"].get<std::string>();
  else
    d.new_memory = body["internal_memory"].dump();
  return d;
}

std::string render_reply(const PolicyDecision& d) {
  json body;
  body["action"] = to_string(d.request.kind);
  body["message"] = d.message;
  body["params"] = d.request.params;
  body["internal_memory"] = d.new_memory;
  return "```json\n" + body.dump(4) + "\n```";
}

std::map<std::string, std::vector<IncomingMessage>> deliver_messages(
    const std::vector<Broadcast>& broadcasts, const World& world) {
  std::map<std::string, std::vector<IncomingMessage>> inboxes;
  int radius = world.grid.perception_radius;
  for (const AgentState& receiver : world.agents) {
    if (!receiver.alive) continue;
    for (const Broadcast& b : broadcasts) {
      if (b.text.empty() || b.sender_id == receiver.id) continue;
      if (chebyshev(receiver.pos, b.sender_pos, world.grid) <= radius)
        inboxes[receiver.id].push_back({b.sender_name, b.text});
    }
  }
  for (auto& [id, box] : inboxes)
    std::sort(box.begin(), box.end(), [](const auto& a, const auto& b) {
      return std::tie(a.sender, a.text) < std::tie(b.sender, b.text);
    });
  return inboxes;
}

namespace {

bool affords(const PromptContext& ctx, ActionKind kind) {
  return std::find(ctx.afforded.begin(), ctx.afforded.end(), kind) !=
         ctx.afforded.end();
}

const char* kDirections[] = {"right", "left", "up", "down"};

PolicyDecision move_decision(const std::string& dir, std::string rationale,
                             std::string memory = {}) {
  PolicyDecision d;
  d.request.kind = ActionKind::kMove;
  d.request.params = {{"direction", dir}};
  d.rationale = std::move(rationale);
  d.new_memory = std::move(memory);
  return d;
}

// Greedy forager: steps toward the Chebyshev-nearest visible food, breaking
// ties by the fixed direction order right < left < up < down; wanders
// uniformly when nothing is visible.
PolicyDecision forage(const PromptContext& ctx, Rng& rng) {
  if (!ctx.visible_food.empty()) {
    int best = INT_MAX;
    for (const VisibleFood& f : ctx.visible_food)
      best = std::min(best, std::max(std::abs(f.dx), std::abs(f.dy)));
    if (best == 0)  // food under our feet (spawned here); staying consumes it
      return move_decision("stay", "eating food in the current cell");
    std::vector<VisibleFood> nearest;
    for (const VisibleFood& f : ctx.visible_food)
      if (std::max(std::abs(f.dx), std::abs(f.dy)) == best) nearest.push_back(f);
    // Pick the direction minimizing the post-move chebyshev+L1 cost over the
    // nearest items; ties resolve in the fixed order right < left < up < down.
    // Minimizing (rather than taking the first improving direction) keeps the
    // walk from flip-flopping between symmetric diagonal targets.
    auto cost = [](int dx, int dy) {
      return std::max(std::abs(dx), std::abs(dy)) + std::abs(dx) + std::abs(dy);
    };
    const int deltas[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    int best_dir = -1, best_cost = INT_MAX;
    const VisibleFood* best_food = nullptr;
    for (int i = 0; i < 4; ++i) {
      for (const VisibleFood& f : nearest) {
        int c = cost(f.dx - deltas[i][0], f.dy - deltas[i][1]);
        if (c < best_cost) {
          best_cost = c;
          best_dir = i;
          best_food = &f;
        }
      }
    }
    if (best_food && best_cost < cost(best_food->dx, best_food->dy)) {
      return move_decision(kDirections[best_dir],
                           "moving " + std::string(kDirections[best_dir]) +
                               " toward food at (" + std::to_string(best_food->dx) +
                               ", " + std::to_string(best_food->dy) + ")");
    }
  }
  const char* dir = kDirections[rng.index(4)];
  return move_decision(dir, std::string("no food visible, wandering ") + dir);
}

class ForagerPolicy : public Policy {
 public:
  std::string name() const override { return "forager"; }
  PolicyDecision decide(const PromptContext& ctx, Rng& rng) override {
    return forage(ctx, rng);
  }
};

class SharerPolicy : public Policy {
 public:
  std::string name() const override { return "sharer"; }
  PolicyDecision decide(const PromptContext& ctx, Rng& rng) override {
    if (ctx.energy > 60.0 && affords(ctx, ActionKind::kGiveEnergy) &&
        !ctx.visible_neighbors.empty()) {
      const VisibleNeighbor* poorest = &ctx.visible_neighbors[0];
      for (const VisibleNeighbor& n : ctx.visible_neighbors) {
        if (n.energy < poorest->energy ||
            (n.energy == poorest->energy && n.name < poorest->name))
          poorest = &n;
      }
      double amount = std::floor(ctx.energy / 4.0);
      PolicyDecision d;
      d.request.kind = ActionKind::kGiveEnergy;
      d.request.params = {{"target", poorest->name}, {"amount", amount}};
      d.message = "Sharing " + fmt_number(amount) + " energy with " + poorest->name + ".";
      d.rationale = "sharing energy with the lowest-energy neighbor";
      return d;
    }
    return forage(ctx, rng);
  }
};

class ScribePolicy : public Policy {
 public:
  std::string name() const override { return "scribe"; }
  PolicyDecision decide(const PromptContext& ctx, Rng& rng) override {
    bool just_ate = !ctx.history.empty() && ctx.history.back().ate_food;
    if (just_ate && affords(ctx, ActionKind::kCreateArtifact)) {
      std::string spots;
      for (const VisibleFood& f : ctx.visible_food) {
        if (!spots.empty()) spots += ", ";
        spots += "(" + std::to_string(f.dx) + ", " + std::to_string(f.dy) + ")";
      }
      if (spots.empty()) spots = "none";
      std::string note_name = "note-" + ctx.agent_name + "-" + std::to_string(ctx.t);
      std::string payload = "Ate food worth " +
                            fmt_number(ctx.history.back().food_value) +
                            " here. More food visible at: " + spots;
      // Chain notes so each one cites its predecessor.
      if (ctx.previous_memory.rfind("note-", 0) == 0)
        payload += " Continues " + ctx.previous_memory + ".";
      PolicyDecision d;
      d.request.kind = ActionKind::kCreateArtifact;
      d.request.params = {{"name", note_name}, {"payload", payload}, {"lifespan", -1}};
      d.new_memory = note_name;
      d.rationale = "recording a food location after eating";
      return d;
    }
    PolicyDecision d = forage(ctx, rng);
    d.new_memory = ctx.previous_memory;
    return d;
  }
};

class RandomPolicy : public Policy {
 public:
  std::string name() const override { return "random"; }
  PolicyDecision decide(const PromptContext& ctx, Rng& rng) override {
    std::vector<ActionKind> options = ctx.afforded;
    if (options.empty()) options.push_back(ActionKind::kMove);
    ActionKind kind = options[rng.index(options.size())];
    PolicyDecision d;
    d.request.kind = kind;
    d.rationale = "uniform random choice";
    switch (kind) {
      case ActionKind::kMove: {
        const char* dirs[] = {"right", "left", "up", "down", "stay"};
        d.request.params = {{"direction", dirs[rng.index(5)]}};
        break;
      }
      case ActionKind::kGiveEnergy:
      case ActionKind::kTakeEnergy: {
        if (ctx.visible_neighbors.empty()) return move_decision("stay", "no target");
        const VisibleNeighbor& n =
            ctx.visible_neighbors[rng.index(ctx.visible_neighbors.size())];
        d.request.params = {{"target", n.name},
                            {"amount", 1 + static_cast<int>(rng.index(10))}};
        break;
      }
      case ActionKind::kReproduce:
        d.request.params = {
            {"energy", 0},
            {"name", ctx.agent_name + "-child-" + std::to_string(ctx.t)}};
        break;
      case ActionKind::kCreateArtifact:
        d.request.params = {
            {"name", "obj-" + ctx.agent_name + "-" + std::to_string(ctx.t)},
            {"payload", "marker left by " + ctx.agent_name},
            {"lifespan", -1}};
        break;
      case ActionKind::kPickupArtifact:
      case ActionKind::kModifyArtifact:
      case ActionKind::kDestroyArtifact: {
        if (ctx.artifacts_here.empty()) return move_decision("stay", "no artifact");
        const std::string& name =
            ctx.artifacts_here[rng.index(ctx.artifacts_here.size())];
        if (kind == ActionKind::kPickupArtifact)
          d.request.params = {{"name", name}};
        else if (kind == ActionKind::kModifyArtifact)
          d.request.params = {{"artifact_name", name},
                              {"payload", "updated by " + ctx.agent_name},
                              {"lifespan", -1}};
        else
          d.request.params = {{"artifact_name", name}};
        break;
      }
      case ActionKind::kDropArtifact: {
        if (ctx.inventory.empty()) return move_decision("stay", "empty inventory");
        d.request.params = {{"name", ctx.inventory[rng.index(ctx.inventory.size())].first}};
        break;
      }
      case ActionKind::kGiveArtifact: {
        if (ctx.inventory.empty() || ctx.visible_neighbors.empty())
          return move_decision("stay", "nothing to give");
        d.request.params = {
            {"artifact_name", ctx.inventory[rng.index(ctx.inventory.size())].first},
            {"target_agent",
             ctx.visible_neighbors[rng.index(ctx.visible_neighbors.size())].name}};
        break;
      }
    }
    return d;
  }
};

class RemotePolicy : public Policy {
 public:
  explicit RemotePolicy(RemotePolicyConfig cfg) : cfg_(std::move(cfg)) {}
  std::string name() const override { return "remote"; }

  PolicyDecision decide(const PromptContext& ctx, Rng& /*rng*/) override {
    PromptPair prompts_pair = assemble_prompts(ctx);
    ChatEndpoint endpoint{cfg_.base_url, cfg_.model, cfg_.api_key_env};
    std::string error;
    auto reply =
        chat_complete(endpoint, prompts_pair.system_text, prompts_pair.user_text, &error);
    if (cfg_.archive && !cfg_.archive_dir.empty())
      archive(ctx, prompts_pair, reply ? *reply : ("<error: " + error + ">"));
    if (!reply) {
      std::cerr << "warning: remote policy failed for " << ctx.agent_name << ": "
                << error << "\n";
      return fallback(ctx);
    }
    auto parsed = parse_reply(*reply);
    if (std::holds_alternative<ParseFailure>(parsed)) {
      std::cerr << "warning: unparseable reply for " << ctx.agent_name << ": "
                << std::get<ParseFailure>(parsed).error << "\n";
      return fallback(ctx);
    }
    return std::get<PolicyDecision>(parsed);
  }

 private:
  // Parse or transport failure: stay put, keep memory.
  PolicyDecision fallback(const PromptContext& ctx) const {
    PolicyDecision d = move_decision("stay", "fallback after policy failure");
    d.new_memory = ctx.previous_memory;
    return d;
  }

  void archive(const PromptContext& ctx, const PromptPair& pair,
               const std::string& reply) const {
    namespace fs = std::filesystem;
    fs::create_directories(cfg_.archive_dir);
    std::string file = cfg_.archive_dir + "/llm-" + std::to_string(ctx.t) + "-" +
                       ctx.agent_id + ".json";
    json record = {{"t", ctx.t},
                   {"agent", ctx.agent_id},
                   {"model", cfg_.model},
                   {"system", pair.system_text},
                   {"user", pair.user_text},
                   {"reply", reply}};
    std::ofstream(file) << record.dump(2) << "\n";
  }

  RemotePolicyConfig cfg_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const std::string& name,
                                    const RemotePolicyConfig* remote) {
  if (name == "forager") return std::make_unique<ForagerPolicy>();
  if (name == "sharer") return std::make_unique<SharerPolicy>();
  if (name == "scribe") return std::make_unique<ScribePolicy>();
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "remote") {
    if (!remote) throw ConfigError("remote policy requires endpoint configuration");
    return std::make_unique<RemotePolicy>(*remote);
  }
  throw ConfigError("unknown policy: " + name);
}

}  // namespace terra
