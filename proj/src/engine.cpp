#include "terra/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "terra/prompts.hpp"

namespace terra {

std::string to_string(Preset p) {
  switch (p) {
    case Preset::kCore: return "core";
    case Preset::kLongHistory: return "long_history";
    case Preset::kNoPersonality: return "no_personality";
    case Preset::kNoMotivation: return "no_motivation";
    case Preset::kCreative: return "creative";
    case Preset::kArtifactCost: return "artifact_cost";
    case Preset::kInertArtifacts: return "inert_artifacts";
    case Preset::kAbundant: return "abundant";
  }
  return "core";
}

std::vector<std::string> preset_names() {
  return {"core",     "long_history",  "no_personality",  "no_motivation",
          "creative", "artifact_cost", "inert_artifacts", "abundant"};
}

Preset preset_from_string(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(Preset::kAbundant); ++i)
    if (to_string(static_cast<Preset>(i)) == name) return static_cast<Preset>(i);
  throw ConfigError("unknown preset: " + name);
}

namespace {

// Frozen food regimes (one-off Monte Carlo calibration, see tests): a lone
// forager reliably survives its lifespan under `abundant` and starves more
// often than not under `scarce`.
void apply_food_regime(GridConfig& grid, bool abundant) {
  if (abundant) {
    grid.food_mode = FoodMode::kUniform;
    grid.food_spawn_rate = 14.0;
    grid.food_decay_prob = 0.02;
    grid.food_value_min = 5.0;
    grid.food_value_max = 10.0;
    grid.initial_food_items = 400;
  } else {
    grid.food_mode = FoodMode::kClustered;
    grid.cluster_count = 3;
    grid.food_spawn_rate = 0.25;
    grid.food_decay_prob = 0.03;
    grid.food_value_min = 5.0;
    grid.food_value_max = 10.0;
    grid.initial_food_items = 8;
  }
}

}  // namespace

RunConfig preset_config(Preset preset) {
  RunConfig cfg;
  cfg.preset = preset;
  cfg.grid.width = 50;
  cfg.grid.height = 50;
  cfg.grid.perception_radius = 6;
  apply_food_regime(cfg.grid, preset == Preset::kAbundant);
  switch (preset) {
    case Preset::kCore:
      break;
    case Preset::kLongHistory:
      cfg.history_len = 20;
      break;
    case Preset::kNoPersonality:
      cfg.personality = false;
      break;
    case Preset::kNoMotivation:
      cfg.motivation = prompts::Motivation::kNone;
      break;
    case Preset::kCreative:
      cfg.motivation = prompts::Motivation::kCreative;
      break;
    case Preset::kArtifactCost:
      cfg.artifact_cost = 10.0;
      break;
    case Preset::kInertArtifacts:
      cfg.inert_artifacts = true;
      break;
    case Preset::kAbundant:
      cfg.history_len = 20;
      break;
  }
  return cfg;
}

RunConfig preset_config(const std::string& name) {
  return preset_config(preset_from_string(name));
}

json RunConfig::to_json() const {
  return {{"preset", terra::to_string(preset)},
          {"grid",
           {{"width", grid.width},
            {"height", grid.height},
            {"perception_radius", grid.perception_radius},
            {"food_mode", terra::to_string(grid.food_mode)},
            {"cluster_count", grid.cluster_count},
            {"food_decay_prob", grid.food_decay_prob},
            {"food_spawn_rate", grid.food_spawn_rate},
            {"food_value_min", grid.food_value_min},
            {"food_value_max", grid.food_value_max},
            {"initial_food_items", grid.initial_food_items}}},
          {"n_agents", n_agents},
          {"initial_energy", initial_energy},
          {"lifespan", lifespan},
          {"max_steps", max_steps},
          {"reproduce_cost", reproduce_cost},
          {"artifact_cost", artifact_cost},
          {"history_len", history_len},
          {"motivation", prompts::to_string(motivation)},
          {"personality", personality},
          {"inert_artifacts", inert_artifacts},
          {"mutation",
           {{"per_trait_prob", mutation.per_trait_prob}, {"sigma", mutation.sigma}}},
          {"payload_cap", payload_cap},
          {"memory_soft", memory_soft},
          {"memory_hard", memory_hard},
          {"seed", seed}};
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg = preset_config(j.value("preset", "core"));
  if (j.contains("grid")) {
    const json& g = j["grid"];
    cfg.grid.width = g.value("width", cfg.grid.width);
    cfg.grid.height = g.value("height", cfg.grid.height);
    cfg.grid.perception_radius =
        g.value("perception_radius", cfg.grid.perception_radius);
    if (g.contains("food_mode"))
      cfg.grid.food_mode = food_mode_from_string(g["food_mode"]);
    cfg.grid.cluster_count = g.value("cluster_count", cfg.grid.cluster_count);
    cfg.grid.food_decay_prob = g.value("food_decay_prob", cfg.grid.food_decay_prob);
    cfg.grid.food_spawn_rate = g.value("food_spawn_rate", cfg.grid.food_spawn_rate);
    cfg.grid.food_value_min = g.value("food_value_min", cfg.grid.food_value_min);
    cfg.grid.food_value_max = g.value("food_value_max", cfg.grid.food_value_max);
    cfg.grid.initial_food_items =
        g.value("initial_food_items", cfg.grid.initial_food_items);
  }
  cfg.n_agents = j.value("n_agents", cfg.n_agents);
  cfg.initial_energy = j.value("initial_energy", cfg.initial_energy);
  cfg.lifespan = j.value("lifespan", cfg.lifespan);
  cfg.max_steps = j.value("max_steps", cfg.max_steps);
  cfg.reproduce_cost = j.value("reproduce_cost", cfg.reproduce_cost);
  cfg.artifact_cost = j.value("artifact_cost", cfg.artifact_cost);
  cfg.history_len = j.value("history_len", cfg.history_len);
  if (j.contains("motivation"))
    cfg.motivation = prompts::motivation_from_string(j["motivation"]);
  cfg.personality = j.value("personality", cfg.personality);
  cfg.inert_artifacts = j.value("inert_artifacts", cfg.inert_artifacts);
  if (j.contains("mutation")) {
    cfg.mutation.per_trait_prob =
        j["mutation"].value("per_trait_prob", cfg.mutation.per_trait_prob);
    cfg.mutation.sigma = j["mutation"].value("sigma", cfg.mutation.sigma);
  }
  cfg.payload_cap = j.value("payload_cap", cfg.payload_cap);
  cfg.memory_soft = j.value("memory_soft", cfg.memory_soft);
  cfg.memory_hard = j.value("memory_hard", cfg.memory_hard);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

ActRules RunConfig::act_rules() const {
  ActRules rules;
  rules.reproduce_cost = reproduce_cost;
  rules.artifact_cost = artifact_cost;
  rules.payload_cap = payload_cap;
  rules.inert_artifacts = inert_artifacts;
  rules.lifespan = lifespan;
  rules.mutation = mutation;
  return rules;
}

json RunSummary::to_json() const {
  return {{"schema", kSummarySchema},
          {"run_id", run_id},
          {"seed", seed},
          {"preset", preset},
          {"longevity", longevity},
          {"steps_executed", steps_executed},
          {"total_artifacts", total_artifacts},
          {"agents_ever", agents_ever},
          {"artifacts_per_agent", artifacts_per_agent},
          {"mean_population", mean_population}};
}

namespace {

struct LedgerTerms {
  double delta_sum = 0;       // energy change across all agents incl. newborns
  int ticked = 0;             // agents that paid the per-step upkeep
  double food = 0;            // eaten food value
  double artifact_costs = 0;  // creation fees
};

void check_step_invariants(const World& world, const LedgerTerms& ledger) {
  double residue =
      ledger.delta_sum + ledger.ticked - ledger.food + ledger.artifact_costs;
  if (std::abs(residue) > 1e-9)
    throw std::logic_error("energy ledger unbalanced: residue " +
                           std::to_string(residue));
  std::set<std::pair<int, int>> cells;
  for (const AgentState& a : world.agents) {
    if (!a.alive) continue;
    if (!cells.insert({a.pos.x, a.pos.y}).second)
      throw std::logic_error("occupancy violated at step " + std::to_string(world.t));
  }
  for (const auto& [name, art] : world.artifacts) {
    if (art.held()) {
      const AgentState* holder = world.find_agent(art.holder());
      if (!holder || std::find(holder->inventory.begin(), holder->inventory.end(),
                               name) == holder->inventory.end())
        throw std::logic_error("artifact holder inconsistent: " + name);
    }
  }
}

struct AgentStepCtx {
  std::string id;
  PromptContext ctx;
  std::vector<std::string> visible_agents;
};

}  // namespace

RunResult run(const RunConfig& config, Policy& policy,
              const std::optional<std::filesystem::path>& out_dir,
              const std::string& run_id) {
  config.grid.validate();
  Rng init_rng(derive_seed(config.seed, "world", 0));
  World world;
  world.grid = config.grid;
  world.inert_artifacts = config.inert_artifacts;
  std::vector<FoodItem> initial_food = world.init(init_rng);
  PopulationConfig pop{config.initial_energy, config.lifespan, config.personality};
  for (AgentState& a : init_population(config.n_agents, pop, config.grid, init_rng))
    world.add_agent(std::move(a));
  world.seed_counters(config.n_agents, 0);

  ActRules rules = config.act_rules();

  std::optional<RunWriter> writer;
  if (out_dir) {
    json header = {{"run_id", run_id},
                   {"seed", config.seed},
                   {"preset", to_string(config.preset)},
                   {"policy", policy.name()},
                   {"prompt_version", prompts::prompt_version()},
                   {"config", config.to_json()}};
    writer.emplace(*out_dir, header);
    std::ofstream(*out_dir / "config.json") << config.to_json().dump(2) << "\n";
    StepMeta initial;
    initial.t = 0;
    for (const FoodItem& item : initial_food)
      initial.food_spawned.emplace_back(item.pos.x, item.pos.y, item.value);
    writer->write_step(initial);
  }

  std::map<std::string, std::vector<StepSummary>> histories;
  std::map<std::string, std::string> pending_info;  // e.g. last rejection note
  std::vector<Broadcast> pending_broadcasts;
  std::map<std::string, ArtifactRow> artifact_rows;

  int longevity = config.max_steps;
  int steps_executed = 0;
  double population_sum = 0.0;
  int total_artifacts = 0;
  bool extinct = false;

  for (int t = 1; t <= config.max_steps && !extinct; ++t) {
    world.t = t;

    std::map<std::string, double> energy_before;
    for (const AgentState& a : world.agents)
      if (a.alive) energy_before[a.id] = a.energy;

    LedgerTerms ledger;
    for (AgentState& a : world.agents) {
      if (!a.alive) continue;
      ++ledger.ticked;
      if (auto cause = tick_vitals(a)) {
        if (writer) writer->write_death({t, a.id, to_string(*cause)});
      }
    }
    if (world.living_count() == 0) {
      longevity = t;
      extinct = true;
      if (writer) writer->write_step(StepMeta{t, {}, {}});
      break;
    }
    ++steps_executed;
    population_sum += world.living_count();

    auto inboxes = deliver_messages(pending_broadcasts, world);
    pending_broadcasts.clear();

    // Context snapshot per living agent, then decisions on derived streams.
    std::vector<AgentStepCtx> contexts;
    for (const AgentState& a : world.agents) {
      if (!a.alive) continue;
      Observation obs = observe(a.id, world);
      PromptContext ctx;
      ctx.agent_id = a.id;
      ctx.agent_name = a.name;
      ctx.t = t;
      ctx.energy = a.energy;
      ctx.time_left = a.time_left;
      ctx.genome = a.genome;
      ctx.observation_text = obs.text();
      ctx.inbox = inboxes.count(a.id) ? inboxes[a.id] : std::vector<IncomingMessage>{};
      const auto& hist = histories[a.id];
      size_t take = std::min<size_t>(hist.size(), config.history_len);
      ctx.history.assign(hist.end() - take, hist.end());
      ctx.history_len = config.history_len;
      for (const std::string& name : a.inventory) {
        auto it = world.artifacts.find(name);
        ctx.inventory.emplace_back(name,
                                   it != world.artifacts.end() ? it->second.payload : "");
      }
      ctx.previous_memory = a.memory;
      if (auto info = pending_info.find(a.id); info != pending_info.end())
        ctx.additional_info = info->second;
      for (ActionKind kind : afford(a, world, rules)) ctx.afforded.push_back(kind);
      ctx.motivation = config.motivation;
      ctx.personality = config.personality;
      ctx.inert_artifacts = config.inert_artifacts;
      ctx.memory_soft = config.memory_soft;
      ctx.memory_hard = config.memory_hard;
      ctx.payload_cap = config.payload_cap;
      ctx.reproduce_cost = config.reproduce_cost;
      ctx.artifact_cost = config.artifact_cost;
      for (const auto& [cell, item] : world.food) {
        int dx = torus_delta(a.pos.x, item.pos.x, world.grid.width);
        int dy = torus_delta(a.pos.y, item.pos.y, world.grid.height);
        if (std::max(std::abs(dx), std::abs(dy)) <= world.grid.perception_radius)
          ctx.visible_food.push_back({dx, dy, item.value});
      }
      for (const AgentState* n : world.agents_within(a.id, world.grid.perception_radius)) {
        int dx = torus_delta(a.pos.x, n->pos.x, world.grid.width);
        int dy = torus_delta(a.pos.y, n->pos.y, world.grid.height);
        ctx.visible_neighbors.push_back({n->name, dx, dy, n->energy});
      }
      for (const Artifact* art : world.artifacts_at(a.pos))
        ctx.artifacts_here.push_back(art->name);
      contexts.push_back({a.id, std::move(ctx), obs.visible_agents});
    }
    pending_info.clear();

    std::vector<ActionRequest> requests;
    std::map<std::string, PolicyDecision> decisions;
    for (AgentStepCtx& c : contexts) {
      Rng agent_rng(derive_seed(config.seed, "policy", fnv1a64(c.id), t));
      PolicyDecision d = policy.decide(c.ctx, agent_rng);
      d.request.agent = c.id;
      requests.push_back(d.request);
      decisions[c.id] = std::move(d);
    }

    Rng step_rng(derive_seed(config.seed, "resolve", t));
    std::vector<ActionOutcome> outcomes = resolve_step(requests, world, rules, step_rng);
    std::map<std::string, const ActionOutcome*> outcome_by_agent;
    for (const ActionOutcome& o : outcomes) outcome_by_agent[o.request.agent] = &o;

    std::vector<std::tuple<int, int, double>> spawned_list;
    std::vector<std::pair<int, int>> decayed_list;

    // Per-agent bookkeeping in creation order.
    std::vector<AgentRecord> records;
    for (AgentStepCtx& c : contexts) {
      AgentState& a = *world.find_agent(c.id);
      const ActionOutcome& o = *outcome_by_agent.at(c.id);
      const PolicyDecision& d = decisions.at(c.id);

      a.memory = truncate_memory(d.new_memory, config.memory_soft, config.memory_hard);

      AgentRecord rec;
      rec.t = t;
      rec.id = a.id;
      rec.name = a.name;
      rec.action_kind = to_string(o.request.kind);
      rec.params = o.request.params;
      rec.status = o.applied ? "applied" : "rejected";
      if (o.reason) rec.reason = to_string(*o.reason);
      rec.message = d.message;
      rec.memory_after = a.memory;
      rec.rationale = d.rationale;
      rec.obs_text = c.ctx.observation_text;
      rec.visible_agents = c.visible_agents;
      rec.inbox = c.ctx.inbox;
      rec.energy = c.ctx.energy;
      rec.time_left = c.ctx.time_left;
      for (const auto& [name, payload] : c.ctx.inventory) rec.inventory.push_back(name);
      rec.pos = a.pos;
      rec.energy_after = a.energy;
      rec.food_eaten = o.effects.food_eaten;
      rec.transfer_amount = o.effects.transfer_amount;
      rec.transfer_target = o.effects.target;

      ledger.food += o.effects.food_eaten;
      if (o.applied && o.request.kind == ActionKind::kCreateArtifact)
        ledger.artifact_costs += rules.artifact_cost;

      if (o.applied && o.effects.birth) {
        const BirthEffect& b = *o.effects.birth;
        rec.events.push_back({{"kind", "birth"},
                              {"child", b.child_id},
                              {"child_name", b.child_name},
                              {"energy", b.child_energy}});
        if (writer) {
          const AgentState* child = world.find_agent(b.child_id);
          writer->write_birth(
              {t, b.child_id, b.child_name, a.id, child->pos, b.child_energy});
        }
      }
      if (o.applied && o.effects.artifact) {
        const ArtifactEffect& ae = *o.effects.artifact;
        rec.events.push_back({{"kind", "artifact"},
                              {"op", ae.op},
                              {"artifact", ae.artifact_id},
                              {"name", ae.artifact_name}});
        std::string payload;
        int lifespan = kInfiniteLifespan;
        auto it = world.artifacts.find(ae.artifact_name);
        if (it != world.artifacts.end()) {
          payload = it->second.payload;
          lifespan = it->second.lifespan;
        }
        if (ae.op == "create") {
          ++total_artifacts;
          ArtifactRow row;
          row.id = ae.artifact_id;
          row.name = ae.artifact_name;
          row.creator = a.id;
          row.created_at = t;
          row.versions.push_back({t, payload, lifespan});
          artifact_rows[ae.artifact_id] = std::move(row);
        } else if (ae.op == "modify") {
          ArtifactRow& row = artifact_rows[ae.artifact_id];
          row.modified_at.push_back(t);
          row.versions.push_back({t, payload, lifespan});
        }
        if (writer)
          writer->write_artifact_op(
              {t, ae.op, ae.artifact_id, ae.artifact_name, a.id, ae.counterparty,
               payload_hash(payload)});
      }
      if (!o.applied && o.reason) {
        pending_info[a.id] = "Note: your previous action (" +
                             prompt_name(o.request.kind) +
                             ") was rejected: " + to_string(*o.reason) + ".";
      }

      // History entry for the next prompts.
      StepSummary s;
      s.t = t;
      s.energy_text = fmt_number_py(c.ctx.energy);
      s.inbox = c.ctx.inbox;
      s.observation_text = c.ctx.observation_text;
      s.action_name = prompt_name(o.request.kind);
      s.params_py = params_python_repr(o.request.params);
      s.message_sent = d.message;
      s.ate_food = o.effects.food_eaten > 0.0;
      s.food_value = o.effects.food_eaten;
      auto& hist = histories[a.id];
      hist.push_back(std::move(s));
      if (static_cast<int>(hist.size()) > config.history_len)
        hist.erase(hist.begin(), hist.end() - config.history_len);

      if (!d.message.empty())
        pending_broadcasts.push_back({a.id, a.name, a.pos, d.message});
      records.push_back(std::move(rec));
    }

    for (const ArtifactEffect& e : age_artifacts(world)) {
      if (writer)
        writer->write_artifact_op({t, "expire", e.artifact_id, e.artifact_name,
                                   "", std::nullopt, ""});
    }

    Rng food_rng(derive_seed(config.seed, "world", t));
    for (const Position& pos : decay_food(world, food_rng))
      decayed_list.emplace_back(pos.x, pos.y);
    for (const FoodItem& item : spawn_food(world, food_rng))
      spawned_list.emplace_back(item.pos.x, item.pos.y, item.value);

    if (config.check_invariants) {
      for (const AgentState& a : world.agents) {
        auto before = energy_before.find(a.id);
        if (before != energy_before.end())
          ledger.delta_sum += a.energy - before->second;
        else if (a.born_at == t)
          ledger.delta_sum += a.energy;
      }
      check_step_invariants(world, ledger);
    }

    if (writer) {
      writer->write_step({t, spawned_list, decayed_list});
      for (const AgentRecord& rec : records) writer->write_record(rec);
    }
  }

  RunSummary summary;
  summary.run_id = run_id;
  summary.seed = config.seed;
  summary.preset = to_string(config.preset);
  summary.longevity = longevity;
  summary.steps_executed = steps_executed;
  summary.total_artifacts = total_artifacts;
  summary.agents_ever = world.agents_ever();
  summary.artifacts_per_agent =
      summary.agents_ever > 0
          ? static_cast<double>(total_artifacts) / summary.agents_ever
          : 0.0;
  summary.mean_population =
      steps_executed > 0 ? population_sum / steps_executed : 0.0;

  if (writer) {
    for (const auto& [id, row] : artifact_rows) writer->write_artifact_row(row);
    writer->write_summary(summary.to_json());
    writer->flush();
  }
  return RunResult{summary, std::move(world)};
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  double idx = q * (xs.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(idx));
  size_t hi = static_cast<size_t>(std::ceil(idx));
  double frac = idx - lo;
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

ConditionSummary summarize(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw ConfigError("summarize requires at least one run");
  ConditionSummary out;
  out.runs = runs;
  auto stats = [](const std::vector<double>& xs, double& mean, double& q1, double& q3) {
    mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    q1 = quantile(xs, 0.25);
    q3 = quantile(xs, 0.75);
  };
  std::vector<double> longevity, total, per_agent, population;
  for (const RunSummary& r : runs) {
    longevity.push_back(r.longevity);
    total.push_back(r.total_artifacts);
    per_agent.push_back(r.artifacts_per_agent);
    population.push_back(r.mean_population);
  }
  stats(longevity, out.mean_longevity, out.q1_longevity, out.q3_longevity);
  stats(total, out.mean_total_artifacts, out.q1_total_artifacts,
        out.q3_total_artifacts);
  stats(per_agent, out.mean_artifacts_per_agent, out.q1_artifacts_per_agent,
        out.q3_artifacts_per_agent);
  stats(population, out.mean_population, out.q1_population, out.q3_population);
  return out;
}

World replay_final_world(const RunLog& log, const RunConfig& config) {
  World world;
  world.grid = config.grid;
  world.inert_artifacts = config.inert_artifacts;
  int final_t = log.final_step();
  world.t = final_t;

  // Food: fold per step in engine order (eaten during resolution, then decay,
  // then spawn).
  std::map<int, std::vector<const AgentRecord*>> records_by_step;
  for (const AgentRecord& r : log.records) records_by_step[r.t].push_back(&r);
  for (const StepMeta& step : log.steps) {
    for (const AgentRecord* r : records_by_step[step.t])
      if (r->food_eaten > 0.0) world.food.erase({r->pos.x, r->pos.y});
    for (const auto& [x, y] : step.food_decayed) world.food.erase({x, y});
    for (const auto& [x, y, v] : step.food_spawned)
      world.food[{x, y}] = FoodItem{{x, y}, v, step.t};
  }

  // Agents: last record carries the post-step state; deaths flip liveness.
  std::map<std::string, AgentRecord> last_record;
  for (const AgentRecord& r : log.records) last_record[r.id] = r;
  std::map<std::string, int> death_step;
  std::map<std::string, std::string> death_cause;
  for (const DeathEvent& d : log.deaths) {
    death_step[d.agent] = d.t;
    death_cause[d.agent] = d.cause;
  }
  std::map<std::string, const BirthEvent*> births;
  for (const BirthEvent& b : log.births) births[b.child] = &b;

  for (const auto& [id, rec] : last_record) {
    AgentState a;
    a.id = id;
    a.name = rec.name;
    a.pos = rec.pos;
    a.memory = rec.memory_after;
    auto died = death_step.find(id);
    if (died != death_step.end()) {
      a.alive = false;
      a.energy = rec.energy_after - 1.0;
      a.time_left = rec.time_left - 1;
    } else {
      a.alive = true;
      a.energy = rec.energy_after;
      a.time_left = rec.time_left;
    }
    if (auto b = births.find(id); b != births.end()) {
      a.parent = b->second->parent;
      a.born_at = b->second->t;
    }
    world.add_agent(std::move(a));
  }
  // Children born on the final step never acted; the birth event carries
  // their state.
  for (const BirthEvent& b : log.births) {
    if (last_record.count(b.child)) continue;
    AgentState a;
    a.id = b.child;
    a.name = b.child_name;
    a.pos = b.pos;
    a.energy = b.energy;
    a.time_left = config.lifespan;
    a.parent = b.parent;
    a.born_at = b.t;
    a.alive = !death_step.count(b.child);
    world.add_agent(std::move(a));
  }

  // Artifacts: fold ops over the version table.
  struct LiveArt {
    std::string name;
    std::variant<Position, std::string> location;
    int version_t = 0;
  };
  std::map<std::string, LiveArt> live;  // by artifact id
  for (const ArtifactOpEvent& op : log.artifact_ops) {
    Position agent_pos{};
    for (const AgentRecord* r : records_by_step[op.t])
      if (r->id == op.agent) agent_pos = r->pos;
    if (op.op == "create") {
      live[op.artifact_id] = {op.artifact_name, agent_pos, op.t};
    } else if (op.op == "pickup") {
      live[op.artifact_id].location = op.agent;
    } else if (op.op == "drop") {
      live[op.artifact_id].location = agent_pos;
    } else if (op.op == "give") {
      live[op.artifact_id].location = op.counterparty.value_or("");
    } else if (op.op == "modify") {
      live[op.artifact_id].version_t = op.t;
    } else if (op.op == "destroy" || op.op == "expire") {
      live.erase(op.artifact_id);
    }
  }
  for (const auto& [id, art] : live) {
    const ArtifactRow* row = log.find_artifact(id);
    if (!row) continue;
    Artifact a;
    a.id = id;
    a.name = art.name;
    a.creator = row->creator;
    a.created_at = row->created_at;
    a.modified_at = row->modified_at;
    const ArtifactVersion* version = &row->versions.back();
    a.payload = version->payload;
    if (version->lifespan == kInfiniteLifespan)
      a.lifespan = kInfiniteLifespan;
    else
      a.lifespan = version->lifespan - (final_t - version->t + 1);
    a.location = art.location;
    if (a.held()) {
      AgentState* holder = world.find_agent(a.holder());
      if (holder) holder->inventory.push_back(a.name);
    }
    world.artifacts.emplace(a.name, std::move(a));
  }
  for (AgentState& a : world.agents) std::sort(a.inventory.begin(), a.inventory.end());
  return world;
}

}  // namespace terra
