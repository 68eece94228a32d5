#include "terra/acts.hpp"

#include <algorithm>
#include <cmath>

namespace terra {

std::string to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kMove: return "move";
    case ActionKind::kGiveEnergy: return "give_energy";
    case ActionKind::kTakeEnergy: return "take_energy";
    case ActionKind::kReproduce: return "reproduce";
    case ActionKind::kCreateArtifact: return "create_artifact";
    case ActionKind::kPickupArtifact: return "pickup_artifact";
    case ActionKind::kDropArtifact: return "drop_artifact";
    case ActionKind::kGiveArtifact: return "give_artifact";
    case ActionKind::kModifyArtifact: return "modify_artifact";
    case ActionKind::kDestroyArtifact: return "destroy_artifact";
  }
  return "move";
}

std::optional<ActionKind> action_kind_from_string(const std::string& s) {
  if (s == "move") return ActionKind::kMove;
  if (s == "give_energy" || s == "give") return ActionKind::kGiveEnergy;
  if (s == "take_energy" || s == "take") return ActionKind::kTakeEnergy;
  if (s == "reproduce") return ActionKind::kReproduce;
  if (s == "create_artifact") return ActionKind::kCreateArtifact;
  if (s == "pickup_artifact") return ActionKind::kPickupArtifact;
  if (s == "drop_artifact") return ActionKind::kDropArtifact;
  if (s == "give_artifact") return ActionKind::kGiveArtifact;
  if (s == "modify_artifact") return ActionKind::kModifyArtifact;
  if (s == "destroy_artifact") return ActionKind::kDestroyArtifact;
  return std::nullopt;
}

std::string prompt_name(ActionKind kind) {
  if (kind == ActionKind::kGiveEnergy) return "give";
  if (kind == ActionKind::kTakeEnergy) return "take";
  return to_string(kind);
}

std::string to_string(Rejection r) {
  switch (r) {
    case Rejection::kNotAfforded: return "NotAfforded";
    case Rejection::kDuplicateName: return "DuplicateName";
    case Rejection::kPayloadTooLong: return "PayloadTooLong";
    case Rejection::kBadAmount: return "BadAmount";
    case Rejection::kNoSuchTarget: return "NoSuchTarget";
    case Rejection::kBadParams: return "BadParams";
    case Rejection::kOccupied: return "Occupied";
    case Rejection::kNoSpace: return "NoSpace";
  }
  return "BadParams";
}

namespace {

bool has_string(const json& p, const char* key) {
  return p.contains(key) && p[key].is_string() && !p[key].get<std::string>().empty();
}

// Integer-valued amount per the action schemas; anything else is malformed.
std::optional<double> integer_amount(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number()) return std::nullopt;
  double v = p[key].get<double>();
  if (v != std::floor(v)) return std::nullopt;
  return v;
}

const Artifact* reachable_artifact(const World& world, const AgentState& agent,
                                   const std::string& name) {
  auto it = world.artifacts.find(name);
  if (it == world.artifacts.end()) return nullptr;
  const Artifact& art = it->second;
  if (art.held()) return art.holder() == agent.id ? &art : nullptr;
  return art.cell() == agent.pos ? &art : nullptr;
}

bool holds(const AgentState& agent, const std::string& name) {
  return std::find(agent.inventory.begin(), agent.inventory.end(), name) !=
         agent.inventory.end();
}

}  // namespace

std::set<ActionKind> afford(const AgentState& agent, const World& world,
                            const ActRules& rules) {
  std::set<ActionKind> out;
  out.insert(ActionKind::kMove);
  bool neighbor = !world.agents_within(agent.id, world.grid.perception_radius).empty();
  if (neighbor) {
    out.insert(ActionKind::kGiveEnergy);
    out.insert(ActionKind::kTakeEnergy);
  }
  if (agent.energy > rules.reproduce_cost) out.insert(ActionKind::kReproduce);
  if (agent.energy > rules.artifact_cost) out.insert(ActionKind::kCreateArtifact);
  if (rules.inert_artifacts) return out;
  bool on_artifact = !world.artifacts_at(agent.pos).empty();
  bool holding = !agent.inventory.empty();
  if (on_artifact) out.insert(ActionKind::kPickupArtifact);
  if (holding) out.insert(ActionKind::kDropArtifact);
  if (holding && neighbor) out.insert(ActionKind::kGiveArtifact);
  if (on_artifact || holding) {
    out.insert(ActionKind::kModifyArtifact);
    out.insert(ActionKind::kDestroyArtifact);
  }
  return out;
}

std::optional<Rejection> validate(const ActionRequest& req, const World& world,
                                  const ActRules& rules) {
  const AgentState* agent = world.find_agent(req.agent);
  if (!agent || !agent->alive) return Rejection::kNotAfforded;
  const json& p = req.params;
  int radius = world.grid.perception_radius;

  switch (req.kind) {
    case ActionKind::kMove: {
      if (!has_string(p, "direction")) return Rejection::kBadParams;
      std::string dir = p["direction"];
      int dx = 0, dy = 0;
      if (dir == "right") dx = 1;
      else if (dir == "left") dx = -1;
      else if (dir == "up") dy = 1;
      else if (dir == "down") dy = -1;
      else if (dir != "stay") return Rejection::kBadParams;
      Position dest = wrap(static_cast<long long>(agent->pos.x) + dx,
                           static_cast<long long>(agent->pos.y) + dy, world.grid);
      if (world.occupied(dest, agent->id)) return Rejection::kOccupied;
      return std::nullopt;
    }
    case ActionKind::kGiveEnergy:
    case ActionKind::kTakeEnergy: {
      if (!has_string(p, "target")) return Rejection::kBadParams;
      auto amount = integer_amount(p, "amount");
      if (!amount) return Rejection::kBadParams;
      const AgentState* target = world.find_agent_by_name(p["target"]);
      if (!target || !target->alive) return Rejection::kNoSuchTarget;
      if (target->id == agent->id) return Rejection::kBadParams;
      if (chebyshev(agent->pos, target->pos, world.grid) > radius)
        return Rejection::kNotAfforded;
      if (*amount < 1) return Rejection::kBadAmount;
      return std::nullopt;
    }
    case ActionKind::kReproduce: {
      if (!has_string(p, "name")) return Rejection::kBadParams;
      auto gift = integer_amount(p, "energy");
      if (!gift) return Rejection::kBadParams;
      if (agent->energy <= rules.reproduce_cost) return Rejection::kNotAfforded;
      if (*gift < 0 || *gift > agent->energy - rules.reproduce_cost)
        return Rejection::kBadAmount;
      if (world.find_agent_by_name(p["name"])) return Rejection::kDuplicateName;
      return std::nullopt;
    }
    case ActionKind::kCreateArtifact: {
      if (!has_string(p, "name") || !p.contains("payload") || !p["payload"].is_string())
        return Rejection::kBadParams;
      auto lifespan = integer_amount(p, "lifespan");
      if (!lifespan || (*lifespan <= 0 && *lifespan != kInfiniteLifespan))
        return Rejection::kBadParams;
      if (agent->energy <= rules.artifact_cost) return Rejection::kNotAfforded;
      if (world.artifacts.count(p["name"])) return Rejection::kDuplicateName;
      if (static_cast<int>(tokenize_ws(p["payload"].get<std::string>()).size()) >
          rules.payload_cap)
        return Rejection::kPayloadTooLong;
      return std::nullopt;
    }
    case ActionKind::kPickupArtifact: {
      if (rules.inert_artifacts) return Rejection::kNotAfforded;
      if (!has_string(p, "name")) return Rejection::kBadParams;
      std::string name = p["name"];
      if (!world.artifacts.count(name)) return Rejection::kNoSuchTarget;
      const Artifact& art = world.artifacts.at(name);
      if (art.held() || art.cell() != agent->pos) return Rejection::kNotAfforded;
      return std::nullopt;
    }
    case ActionKind::kDropArtifact: {
      if (rules.inert_artifacts) return Rejection::kNotAfforded;
      if (!has_string(p, "name")) return Rejection::kBadParams;
      std::string name = p["name"];
      if (!world.artifacts.count(name)) return Rejection::kNoSuchTarget;
      if (!holds(*agent, name)) return Rejection::kNotAfforded;
      return std::nullopt;
    }
    case ActionKind::kGiveArtifact: {
      if (rules.inert_artifacts) return Rejection::kNotAfforded;
      if (!has_string(p, "artifact_name") || !has_string(p, "target_agent"))
        return Rejection::kBadParams;
      if (!world.artifacts.count(p["artifact_name"])) return Rejection::kNoSuchTarget;
      if (!holds(*agent, p["artifact_name"])) return Rejection::kNotAfforded;
      const AgentState* target = world.find_agent_by_name(p["target_agent"]);
      if (!target || !target->alive) return Rejection::kNoSuchTarget;
      if (target->id == agent->id) return Rejection::kBadParams;
      if (chebyshev(agent->pos, target->pos, world.grid) > radius)
        return Rejection::kNotAfforded;
      return std::nullopt;
    }
    case ActionKind::kModifyArtifact: {
      if (rules.inert_artifacts) return Rejection::kNotAfforded;
      if (!has_string(p, "artifact_name") || !p.contains("payload") ||
          !p["payload"].is_string())
        return Rejection::kBadParams;
      auto lifespan = integer_amount(p, "lifespan");
      if (!lifespan || (*lifespan <= 0 && *lifespan != kInfiniteLifespan))
        return Rejection::kBadParams;
      if (!world.artifacts.count(p["artifact_name"])) return Rejection::kNoSuchTarget;
      if (!reachable_artifact(world, *agent, p["artifact_name"]))
        return Rejection::kNotAfforded;
      if (static_cast<int>(tokenize_ws(p["payload"].get<std::string>()).size()) >
          rules.payload_cap)
        return Rejection::kPayloadTooLong;
      return std::nullopt;
    }
    case ActionKind::kDestroyArtifact: {
      if (rules.inert_artifacts) return Rejection::kNotAfforded;
      if (!has_string(p, "artifact_name")) return Rejection::kBadParams;
      if (!world.artifacts.count(p["artifact_name"])) return Rejection::kNoSuchTarget;
      if (!reachable_artifact(world, *agent, p["artifact_name"]))
        return Rejection::kNotAfforded;
      return std::nullopt;
    }
  }
  return Rejection::kBadParams;
}

namespace {

ActionOutcome apply_one(const ActionRequest& req, World& world,
                        const ActRules& rules, Rng& rng) {
  ActionOutcome out;
  out.request = req;
  if (auto reason = validate(req, world, rules)) {
    out.reason = reason;
    return out;
  }
  AgentState& agent = *world.find_agent(req.agent);
  const json& p = req.params;

  switch (req.kind) {
    case ActionKind::kMove: {
      std::string dir = p["direction"];
      int dx = dir == "right" ? 1 : dir == "left" ? -1 : 0;
      int dy = dir == "up" ? 1 : dir == "down" ? -1 : 0;
      Position dest = wrap(static_cast<long long>(agent.pos.x) + dx,
                           static_cast<long long>(agent.pos.y) + dy, world.grid);
      agent.pos = dest;
      auto food_it = world.food.find({dest.x, dest.y});
      if (food_it != world.food.end()) {
        out.effects.food_eaten = food_it->second.value;
        out.effects.energy_delta += food_it->second.value;
        agent.energy += food_it->second.value;
        world.food.erase(food_it);
      }
      break;
    }
    case ActionKind::kGiveEnergy: {
      AgentState& target = *world.find_agent_by_name(p["target"]);
      double amount = std::min(p["amount"].get<double>(), agent.energy);
      agent.energy -= amount;
      target.energy += amount;
      out.effects.energy_delta = -amount;
      out.effects.transfer_amount = amount;
      out.effects.target = target.id;
      break;
    }
    case ActionKind::kTakeEnergy: {
      AgentState& target = *world.find_agent_by_name(p["target"]);
      double amount = std::min(p["amount"].get<double>(), target.energy);
      target.energy -= amount;
      agent.energy += amount;
      out.effects.energy_delta = amount;
      out.effects.transfer_amount = amount;
      out.effects.target = target.id;
      break;
    }
    case ActionKind::kReproduce: {
      auto cell = world.free_adjacent_cell(agent.pos, rng);
      if (!cell) {
        out.reason = Rejection::kNoSpace;
        return out;
      }
      double gift = p["energy"].get<double>();
      double cost = rules.reproduce_cost + gift;
      agent.energy -= cost;
      out.effects.energy_delta = -cost;
      AgentState child;
      child.id = world.next_agent_id();
      child.name = p["name"];
      child.pos = *cell;
      child.energy = rules.reproduce_cost + gift;
      child.time_left = rules.lifespan;
      if (agent.genome) child.genome = mutate(*agent.genome, rules.mutation, rng);
      child.parent = agent.id;
      child.born_at = world.t;
      out.effects.birth = BirthEffect{child.id, child.name, child.energy};
      world.add_agent(std::move(child));
      break;
    }
    case ActionKind::kCreateArtifact: {
      agent.energy -= rules.artifact_cost;
      out.effects.energy_delta = -rules.artifact_cost;
      Artifact art;
      art.id = world.next_artifact_id();
      art.name = p["name"];
      art.payload = p["payload"];
      art.lifespan = static_cast<int>(p["lifespan"].get<double>());
      art.location = agent.pos;
      art.creator = agent.id;
      art.created_at = world.t;
      out.effects.artifact = ArtifactEffect{"create", art.id, art.name, std::nullopt};
      world.artifacts.emplace(art.name, std::move(art));
      break;
    }
    case ActionKind::kPickupArtifact: {
      Artifact& art = world.artifacts.at(p["name"]);
      art.location = agent.id;
      agent.inventory.push_back(art.name);
      out.effects.artifact = ArtifactEffect{"pickup", art.id, art.name, std::nullopt};
      break;
    }
    case ActionKind::kDropArtifact: {
      Artifact& art = world.artifacts.at(p["name"]);
      art.location = agent.pos;
      std::erase(agent.inventory, art.name);
      out.effects.artifact = ArtifactEffect{"drop", art.id, art.name, std::nullopt};
      break;
    }
    case ActionKind::kGiveArtifact: {
      Artifact& art = world.artifacts.at(p["artifact_name"]);
      AgentState& target = *world.find_agent_by_name(p["target_agent"]);
      std::erase(agent.inventory, art.name);
      target.inventory.push_back(art.name);
      art.location = target.id;
      out.effects.target = target.id;
      out.effects.artifact = ArtifactEffect{"give", art.id, art.name, target.id};
      break;
    }
    case ActionKind::kModifyArtifact: {
      Artifact& art = world.artifacts.at(p["artifact_name"]);
      art.payload = p["payload"];
      art.lifespan = static_cast<int>(p["lifespan"].get<double>());
      art.modified_at.push_back(world.t);
      out.effects.artifact = ArtifactEffect{"modify", art.id, art.name, std::nullopt};
      break;
    }
    case ActionKind::kDestroyArtifact: {
      Artifact art = world.artifacts.at(p["artifact_name"]);
      if (art.held()) {
        AgentState* holder = world.find_agent(art.holder());
        if (holder) std::erase(holder->inventory, art.name);
      }
      world.artifacts.erase(art.name);
      out.effects.artifact = ArtifactEffect{"destroy", art.id, art.name, std::nullopt};
      break;
    }
  }
  out.applied = true;
  return out;
}

}  // namespace

std::vector<ActionOutcome> resolve_step(const std::vector<ActionRequest>& requests,
                                        World& world, const ActRules& rules,
                                        Rng& rng) {
  std::vector<ActionRequest> order = requests;
  rng.shuffle(order);
  std::vector<ActionOutcome> outcomes;
  outcomes.reserve(order.size());
  for (const ActionRequest& req : order)
    outcomes.push_back(apply_one(req, world, rules, rng));
  return outcomes;
}

std::vector<ArtifactEffect> age_artifacts(World& world) {
  std::vector<ArtifactEffect> expired;
  for (auto it = world.artifacts.begin(); it != world.artifacts.end();) {
    Artifact& art = it->second;
    if (art.lifespan == kInfiniteLifespan) {
      ++it;
      continue;
    }
    art.lifespan -= 1;
    if (art.lifespan > 0) {
      ++it;
      continue;
    }
    if (art.held()) {
      AgentState* holder = world.find_agent(art.holder());
      if (holder) std::erase(holder->inventory, art.name);
    }
    expired.push_back(ArtifactEffect{"expire", art.id, art.name, std::nullopt});
    it = world.artifacts.erase(it);
  }
  return expired;
}

}  // namespace terra
