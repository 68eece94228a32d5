#include <doctest.h>

#include <cmath>

#include "terra/acts.hpp"

using namespace terra;

namespace {

struct Fixture {
  World world;
  ActRules rules;

  Fixture() {
    world.grid.width = 50;
    world.grid.height = 50;
    world.grid.perception_radius = 6;
    world.grid.food_value_min = 1.0;
    world.grid.food_value_max = 1.0;
    rules.reproduce_cost = 50.0;
    rules.artifact_cost = 0.0;
    rules.lifespan = 100;
    world.seed_counters(100, 100);
  }

  // Returns the id; references into world.agents do not survive later adds.
  std::string add(const std::string& name, int x, int y, double energy = 50) {
    AgentState a;
    a.id = "agent-" + name;
    a.name = name;
    a.pos = {x, y};
    a.energy = energy;
    a.time_left = 100;
    a.genome = Genome{};
    world.add_agent(std::move(a));
    return world.agents.back().id;
  }

  AgentState& agent(const std::string& name) { return *world.find_agent("agent-" + name); }

  Artifact& put_artifact(const std::string& name, Position pos,
                         const std::string& payload = "x") {
    Artifact art;
    art.id = "art-" + name;
    art.name = name;
    art.payload = payload;
    art.location = pos;
    art.creator = "agent-x";
    return world.artifacts.emplace(name, std::move(art)).first->second;
  }

  ActionRequest req(const std::string& agent, ActionKind kind, json params) {
    return ActionRequest{"agent-" + agent, kind, std::move(params)};
  }
};

}  // namespace

TEST_CASE("afford: lone agent with spare energy") {
  Fixture f;
  f.add("a", 10, 10, 60);
  auto set = afford(f.world.agents[0], f.world, f.rules);
  CHECK(set == std::set<ActionKind>{ActionKind::kMove, ActionKind::kReproduce,
                                    ActionKind::kCreateArtifact});
}

TEST_CASE("afford: neighbor enables energy transfer") {
  Fixture f;
  f.add("a", 10, 10, 30);
  f.add("b", 11, 11, 30);
  auto set = afford(f.world.agents[0], f.world, f.rules);
  CHECK(set.count(ActionKind::kGiveEnergy));
  CHECK(set.count(ActionKind::kTakeEnergy));
  CHECK(!set.count(ActionKind::kReproduce));  // 30 <= 50
}

TEST_CASE("afford: artifact at the cell enables pickup/modify/destroy") {
  Fixture f;
  f.add("a", 10, 10, 30);
  f.put_artifact("note", {10, 10});
  auto set = afford(f.world.agents[0], f.world, f.rules);
  CHECK(set.count(ActionKind::kPickupArtifact));
  CHECK(set.count(ActionKind::kModifyArtifact));
  CHECK(set.count(ActionKind::kDestroyArtifact));
  CHECK(!set.count(ActionKind::kDropArtifact));
  CHECK(!set.count(ActionKind::kGiveArtifact));
}

TEST_CASE("afford: held artifact enables drop, and give with a neighbor") {
  Fixture f;
  f.add("a", 10, 10, 30);
  Artifact& art = f.put_artifact("note", {10, 10});
  art.location = "agent-a";
  f.agent("a").inventory.push_back("note");
  auto set = afford(f.agent("a"), f.world, f.rules);
  CHECK(set.count(ActionKind::kDropArtifact));
  CHECK(!set.count(ActionKind::kGiveArtifact));
  f.add("b", 12, 12, 30);
  set = afford(f.agent("a"), f.world, f.rules);
  CHECK(set.count(ActionKind::kGiveArtifact));
}

TEST_CASE("afford: inert worlds offer only create among artifact ops") {
  Fixture f;
  f.rules.inert_artifacts = true;
  f.world.inert_artifacts = true;
  f.add("a", 10, 10, 60);
  f.put_artifact("note", {10, 10});
  auto set = afford(f.agent("a"), f.world, f.rules);
  CHECK(set.count(ActionKind::kCreateArtifact));
  CHECK(!set.count(ActionKind::kPickupArtifact));
  CHECK(!set.count(ActionKind::kModifyArtifact));
  CHECK(!set.count(ActionKind::kDestroyArtifact));
}

TEST_CASE("afford: creation gated by the artifact fee") {
  Fixture f;
  f.rules.artifact_cost = 10.0;
  f.add("a", 10, 10, 10);
  CHECK(!afford(f.world.agents[0], f.world, f.rules).count(ActionKind::kCreateArtifact));
  f.add("b", 30, 30, 11);
  CHECK(afford(f.world.agents[1], f.world, f.rules).count(ActionKind::kCreateArtifact));
}

TEST_CASE("validate: typed rejection reasons") {
  Fixture f;
  f.add("a", 10, 10, 59);
  f.add("b", 11, 10, 40);
  f.add("far", 30, 30, 40);
  f.put_artifact("note", {10, 10});

  CHECK(!validate(f.req("a", ActionKind::kGiveEnergy, {{"target", "b"}, {"amount", 10}}),
                  f.world, f.rules));
  CHECK(*validate(f.req("a", ActionKind::kGiveEnergy, {{"target", "b"}, {"amount", 0}}),
                  f.world, f.rules) == Rejection::kBadAmount);
  CHECK(*validate(f.req("a", ActionKind::kTakeEnergy, {{"target", "far"}, {"amount", 5}}),
                  f.world, f.rules) == Rejection::kNotAfforded);
  CHECK(*validate(f.req("a", ActionKind::kGiveEnergy, {{"target", "ghost"}, {"amount", 5}}),
                  f.world, f.rules) == Rejection::kNoSuchTarget);
  CHECK(*validate(f.req("a", ActionKind::kCreateArtifact,
                        {{"name", "note"}, {"payload", "p"}, {"lifespan", -1}}),
                  f.world, f.rules) == Rejection::kDuplicateName);
  CHECK(*validate(f.req("a", ActionKind::kReproduce, {{"name", "b"}, {"energy", 0}}),
                  f.world, f.rules) == Rejection::kDuplicateName);

  std::string long_payload;
  for (int i = 0; i < 501; ++i) long_payload += "w ";
  CHECK(*validate(f.req("a", ActionKind::kCreateArtifact,
                        {{"name", "big"}, {"payload", long_payload}, {"lifespan", -1}}),
                  f.world, f.rules) == Rejection::kPayloadTooLong);

  CHECK(*validate(f.req("a", ActionKind::kMove, {{"direction", "sideways"}}), f.world,
                  f.rules) == Rejection::kBadParams);
  CHECK(*validate(f.req("a", ActionKind::kReproduce, {{"name", "kid"}, {"energy", 20}}),
                  f.world, f.rules) == Rejection::kBadAmount);  // 59-50 < 20
}

TEST_CASE("resolve: energy transfer conserves the pair total") {
  Fixture f;
  f.add("a", 10, 10, 59);
  f.add("b", 11, 10, 40);
  Rng rng(1);
  auto outcomes = resolve_step(
      {f.req("a", ActionKind::kGiveEnergy, {{"target", "b"}, {"amount", 10}}),
       f.req("b", ActionKind::kMove, {{"direction", "stay"}})},
      f.world, f.rules, rng);
  CHECK(f.world.find_agent("agent-a")->energy == 49);
  CHECK(f.world.find_agent("agent-b")->energy == 50);
}

TEST_CASE("resolve: give clamps to the giver's energy") {
  Fixture f;
  f.add("a", 10, 10, 7);
  f.add("b", 11, 10, 10);
  Rng rng(1);
  auto outcomes = resolve_step(
      {f.req("a", ActionKind::kGiveEnergy, {{"target", "b"}, {"amount", 100}})},
      f.world, f.rules, rng);
  REQUIRE(outcomes.size() == 1);
  CHECK(outcomes[0].applied);
  CHECK(outcomes[0].effects.transfer_amount == 7);
  CHECK(f.world.find_agent("agent-a")->energy == 0);
  CHECK(f.world.find_agent("agent-b")->energy == 17);
}

TEST_CASE("resolve: take clamps to the target's energy") {
  Fixture f;
  f.add("a", 10, 10, 10);
  f.add("b", 11, 10, 3);
  Rng rng(1);
  resolve_step({f.req("a", ActionKind::kTakeEnergy, {{"target", "b"}, {"amount", 50}})},
               f.world, f.rules, rng);
  CHECK(f.world.find_agent("agent-a")->energy == 13);
  CHECK(f.world.find_agent("agent-b")->energy == 0);
}

TEST_CASE("resolve: reproduce arithmetic and child placement") {
  Fixture f;
  f.add("a", 10, 10, 80);
  Rng rng(1);
  f.world.t = 9;
  auto outcomes = resolve_step(
      {f.req("a", ActionKind::kReproduce, {{"name", "kid"}, {"energy", 10}})}, f.world,
      f.rules, rng);
  REQUIRE(outcomes.size() == 1);
  REQUIRE(outcomes[0].applied);
  CHECK(f.world.find_agent("agent-a")->energy == 20);
  const AgentState* kid = f.world.find_agent_by_name("kid");
  REQUIRE(kid);
  CHECK(kid->energy == 60);
  CHECK(kid->time_left == 100);
  CHECK(kid->born_at == 9);
  CHECK(chebyshev(kid->pos, Position{10, 10}, f.world.grid) == 1);
  CHECK(kid->parent == std::string("agent-a"));
  CHECK(kid->genome.has_value());
}

TEST_CASE("resolve: reproduce fails with no free adjacent cell") {
  Fixture f;
  f.add("a", 10, 10, 80);
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      if (dx || dy)
        f.add("n" + std::to_string(dx + 1) + std::to_string(dy + 1), 10 + dx, 10 + dy);
  Rng rng(1);
  std::vector<ActionRequest> reqs = {
      f.req("a", ActionKind::kReproduce, {{"name", "kid"}, {"energy", 0}})};
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      if (dx || dy)
        reqs.push_back(f.req("n" + std::to_string(dx + 1) + std::to_string(dy + 1),
                             ActionKind::kMove, {{"direction", "stay"}}));
  auto outcomes = resolve_step(reqs, f.world, f.rules, rng);
  for (const auto& o : outcomes) {
    if (o.request.kind != ActionKind::kReproduce) continue;
    CHECK(!o.applied);
    CHECK(*o.reason == Rejection::kNoSpace);
    CHECK(o.effects.energy_delta == 0);
  }
  CHECK(f.world.find_agent("agent-a")->energy == 80);
}

TEST_CASE("resolve: contested cell admits exactly one mover") {
  Fixture f;
  f.add("a", 10, 10);
  f.add("b", 12, 10);
  int a_wins = 0, b_wins = 0;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    World world = f.world;  // fresh copy each trial
    Rng rng(seed);
    auto outcomes = resolve_step(
        {ActionRequest{"agent-a", ActionKind::kMove, {{"direction", "right"}}},
         ActionRequest{"agent-b", ActionKind::kMove, {{"direction", "left"}}}},
        world, f.rules, rng);
    int applied = 0;
    for (const auto& o : outcomes) {
      applied += o.applied;
      if (o.applied && o.request.agent == "agent-a") ++a_wins;
      if (o.applied && o.request.agent == "agent-b") ++b_wins;
      if (!o.applied) CHECK(*o.reason == Rejection::kOccupied);
    }
    CHECK(applied == 1);
    CHECK(world.occupied({11, 10}));
  }
  // Order comes from the step RNG, so the split hovers around 50/50.
  CHECK(a_wins + b_wins == 10000);
  CHECK(std::abs(a_wins - 5000) < 300);
}

TEST_CASE("resolve: moving eats the food at the destination, stay included") {
  Fixture f;
  f.add("a", 10, 10, 20);
  f.world.food[{11, 10}] = FoodItem{{11, 10}, 7.0, 0};
  Rng rng(1);
  resolve_step({f.req("a", ActionKind::kMove, {{"direction", "right"}})}, f.world,
               f.rules, rng);
  CHECK(f.world.find_agent("agent-a")->energy == 27);
  CHECK(f.world.food.empty());

  f.world.food[{11, 10}] = FoodItem{{11, 10}, 3.0, 0};
  resolve_step({f.req("a", ActionKind::kMove, {{"direction", "stay"}})}, f.world,
               f.rules, rng);
  CHECK(f.world.find_agent("agent-a")->energy == 30);
  CHECK(f.world.food.empty());
}

TEST_CASE("resolve: artifact lifecycle") {
  Fixture f;
  f.add("a", 10, 10, 50);
  f.add("b", 11, 10, 50);
  Rng rng(1);
  f.world.t = 3;

  resolve_step({f.req("a", ActionKind::kCreateArtifact,
                      {{"name", "note"}, {"payload", "hello"}, {"lifespan", -1}})},
               f.world, f.rules, rng);
  REQUIRE(f.world.artifacts.count("note"));
  CHECK(f.world.artifacts.at("note").creator == "agent-a");
  CHECK(f.world.artifacts.at("note").created_at == 3);

  resolve_step({f.req("a", ActionKind::kPickupArtifact, {{"name", "note"}})}, f.world,
               f.rules, rng);
  CHECK(f.world.artifacts.at("note").held());
  CHECK(f.agent("a").inventory == std::vector<std::string>{"note"});

  resolve_step({f.req("a", ActionKind::kGiveArtifact,
                      {{"artifact_name", "note"}, {"target_agent", "b"}})},
               f.world, f.rules, rng);
  CHECK(f.agent("a").inventory.empty());
  CHECK(f.world.find_agent("agent-b")->inventory == std::vector<std::string>{"note"});
  CHECK(f.world.artifacts.at("note").holder() == "agent-b");

  resolve_step({f.req("b", ActionKind::kModifyArtifact,
                      {{"artifact_name", "note"}, {"payload", "v2"}, {"lifespan", 5}})},
               f.world, f.rules, rng);
  CHECK(f.world.artifacts.at("note").payload == "v2");
  CHECK(f.world.artifacts.at("note").lifespan == 5);
  CHECK(f.world.artifacts.at("note").modified_at == std::vector<int>{3});

  resolve_step({f.req("b", ActionKind::kDropArtifact, {{"name", "note"}})}, f.world,
               f.rules, rng);
  CHECK(!f.world.artifacts.at("note").held());
  CHECK(f.world.artifacts.at("note").cell() == Position{11, 10});

  resolve_step({f.req("b", ActionKind::kDestroyArtifact, {{"artifact_name", "note"}})},
               f.world, f.rules, rng);
  CHECK(f.world.artifacts.empty());
}

TEST_CASE("age_artifacts: countdown, expiry, infinite") {
  Fixture f;
  f.add("a", 10, 10);
  f.put_artifact("short", {5, 5}).lifespan = 1;
  f.put_artifact("long", {6, 6}).lifespan = kInfiniteLifespan;
  Artifact& held = f.put_artifact("held", {10, 10});
  held.lifespan = 1;
  held.location = "agent-a";
  f.agent("a").inventory.push_back("held");

  auto expired = age_artifacts(f.world);
  CHECK(expired.size() == 2);
  CHECK(!f.world.artifacts.count("short"));
  CHECK(!f.world.artifacts.count("held"));
  CHECK(f.agent("a").inventory.empty());
  CHECK(f.world.artifacts.count("long"));

  for (int i = 0; i < 10000; ++i) age_artifacts(f.world);
  CHECK(f.world.artifacts.count("long"));
}

TEST_CASE("resolution is deterministic for a fixed seed") {
  auto run_once = [](uint64_t seed) {
    Fixture f;
    f.add("a", 10, 10, 60);
    f.add("b", 11, 10, 60);
    f.add("c", 12, 10, 60);
    Rng rng(seed);
    auto outcomes = resolve_step(
        {f.req("a", ActionKind::kMove, {{"direction", "right"}}),
         f.req("b", ActionKind::kMove, {{"direction", "left"}}),
         f.req("c", ActionKind::kGiveEnergy, {{"target", "b"}, {"amount", 5}})},
        f.world, f.rules, rng);
    std::string trace;
    for (const auto& o : outcomes)
      trace += o.request.agent + (o.applied ? "+" : "-");
    return trace;
  };
  CHECK(run_once(5) == run_once(5));
}

TEST_CASE("energy ledger balances over random steps") {
  Rng meta(99);
  for (int trial = 0; trial < 40; ++trial) {
    Fixture f;
    int n = 3 + static_cast<int>(meta.index(5));
    for (int i = 0; i < n; ++i)
      f.add(std::to_string(i), static_cast<int>(meta.index(50)),
            static_cast<int>(meta.index(50)), 40 + static_cast<int>(meta.index(60)));
    // integer-valued food for exact arithmetic
    for (int i = 0; i < 5; ++i) {
      Position p{static_cast<int>(meta.index(50)), static_cast<int>(meta.index(50))};
      f.world.food[{p.x, p.y}] = FoodItem{p, static_cast<double>(1 + meta.index(9)), 0};
    }
    double before = 0;
    for (const AgentState& a : f.world.agents) before += a.energy;

    std::vector<ActionRequest> reqs;
    for (const AgentState& a : f.world.agents) {
      auto afforded = afford(a, f.world, f.rules);
      std::vector<ActionKind> options(afforded.begin(), afforded.end());
      ActionKind kind = options[meta.index(options.size())];
      json params;
      switch (kind) {
        case ActionKind::kMove: {
          const char* dirs[] = {"right", "left", "up", "down", "stay"};
          params = {{"direction", dirs[meta.index(5)]}};
          break;
        }
        case ActionKind::kGiveEnergy:
        case ActionKind::kTakeEnergy: {
          auto near = f.world.agents_within(a.id, 6);
          params = {{"target", near[meta.index(near.size())]->name},
                    {"amount", 1 + static_cast<int>(meta.index(20))}};
          break;
        }
        case ActionKind::kReproduce:
          params = {{"name", a.name + "kid"}, {"energy", 0}};
          break;
        default:
          params = {{"name", "obj" + a.name}, {"payload", "p"}, {"lifespan", -1}};
          kind = ActionKind::kCreateArtifact;
          break;
      }
      reqs.push_back({a.id, kind, params});
    }
    Rng rng(trial);
    auto outcomes = resolve_step(reqs, f.world, f.rules, rng);
    double after = 0;
    for (const AgentState& a : f.world.agents) after += a.energy;
    double food_eaten = 0, fees = 0;
    for (const auto& o : outcomes) {
      food_eaten += o.effects.food_eaten;
      if (o.applied && o.request.kind == ActionKind::kCreateArtifact)
        fees += f.rules.artifact_cost;
    }
    // No vitals in this harness: change = food - fees exactly.
    CHECK(after - before == food_eaten - fees);
  }
}
