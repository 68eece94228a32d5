// The ten-action vocabulary: affordances, validation, synchronous
// random-order resolution, artifact aging.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "terra/world.hpp"

namespace terra {

using json = nlohmann::json;

enum class ActionKind {
  kMove,
  kGiveEnergy,
  kTakeEnergy,
  kReproduce,
  kCreateArtifact,
  kPickupArtifact,
  kDropArtifact,
  kGiveArtifact,
  kModifyArtifact,
  kDestroyArtifact,
};

// Canonical names, used in logs.
std::string to_string(ActionKind kind);
// Accepts both canonical names and the short prompt spellings give/take.
std::optional<ActionKind> action_kind_from_string(const std::string& s);
// Spelling used in prompts (give_energy -> "give", take_energy -> "take").
std::string prompt_name(ActionKind kind);

struct ActionRequest {
  std::string agent;  // agent id
  ActionKind kind = ActionKind::kMove;
  json params = json::object();
};

enum class Rejection {
  kNotAfforded,
  kDuplicateName,
  kPayloadTooLong,
  kBadAmount,
  kNoSuchTarget,
  kBadParams,
  kOccupied,
  kNoSpace,
};
std::string to_string(Rejection r);

struct BirthEffect {
  std::string child_id;
  std::string child_name;
  double child_energy = 0.0;
};

struct ArtifactEffect {
  std::string op;  // create/pickup/drop/give/modify/destroy/expire
  std::string artifact_id;
  std::string artifact_name;
  std::optional<std::string> counterparty;  // receiving agent for give
};

struct Effects {
  double energy_delta = 0.0;           // acting agent, this action only
  double food_eaten = 0.0;             // value of food consumed by a move
  double transfer_amount = 0.0;        // effective give/take amount after clamping
  std::optional<std::string> target;   // id of the other agent involved
  std::optional<BirthEffect> birth;
  std::optional<ArtifactEffect> artifact;
};

struct ActionOutcome {
  ActionRequest request;
  bool applied = false;
  std::optional<Rejection> reason;
  Effects effects;
};

struct ActRules {
  double reproduce_cost = 50.0;
  double artifact_cost = 0.0;
  int payload_cap = 500;  // whitespace tokens
  bool inert_artifacts = false;
  int lifespan = 100;  // offspring start with a full lifespan
  MutationConfig mutation;
};

// State-dependent action subset for one living agent.
std::set<ActionKind> afford(const AgentState& agent, const World& world,
                            const ActRules& rules);

// Full re-check against the current world; nullopt means the request is
// applicable right now.
std::optional<Rejection> validate(const ActionRequest& req, const World& world,
                                  const ActRules& rules);

// Shuffles requests with the step RNG, then applies each sequentially,
// re-validating against the mutated world.
std::vector<ActionOutcome> resolve_step(const std::vector<ActionRequest>& requests,
                                        World& world, const ActRules& rules,
                                        Rng& rng);

// Decrements finite lifespans; expired artifacts vanish, also from
// inventories. Returns the expired artifacts.
std::vector<ArtifactEffect> age_artifacts(World& world);

}  // namespace terra
