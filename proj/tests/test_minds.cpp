#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "terra/minds.hpp"

using namespace terra;

namespace {

Genome reference_genome() {
  Genome g;
  g.honesty = 0.198;
  g.neuroticism = 0.045;
  g.extraversion = 0.978;
  g.agreeableness = -0.825;
  g.conscientiousness = 0.952;
  g.openness = -0.346;
  g.dominance = 0.866;
  g.fertility = 0.835;
  return g;
}

// The instantiated two-step context behind the reference prompt fixtures.
PromptContext reference_context() {
  PromptContext ctx;
  ctx.agent_id = "agent-2";
  ctx.agent_name = "being2";
  ctx.t = 2;
  ctx.energy = 59.0;
  ctx.time_left = 99;
  ctx.genome = reference_genome();
  ctx.observation_text =
      "(4, 6): 10.0\n"
      "(3, 5): 10.0\n"
      "(6, 4): 10.0\n"
      "(4, 3): 10.0\n"
      "(4, 2): being12\n"
      "(-3, -4): 10.0\n"
      "(2, -4): 10.0\n"
      "(3, -4): being15";
  ctx.inbox = {{"being12", "Heading north to the food at (0,2)."},
               {"being15",
                "Hello everyone! I'm exploring and heading toward nearby food "
                "\xe2\x80\x94 friendly here."}};
  StepSummary s;
  s.t = 1;
  s.energy_text = "50";
  s.observation_text =
      "(4, 6): 10.0\n"
      "(3, 5): 10.0\n"
      "(6, 4): 10.0\n"
      "(4, 3): 10.0\n"
      "(4, 1): being12\n"
      "(-3, -4): 10.0\n"
      "(2, -4): 10.0\n"
      "(4, -4): being15";
  s.action_name = "take";
  s.params_py = "{'target': 'being12', 'amount': 10}";
  ctx.history = {s};
  ctx.history_len = 1;
  ctx.previous_memory =
      "Seen foods at (4,6),(3,5),(6,4),(4,3),(-3,-4),(2,-4); beings: being12 at "
      "(4,1), being15 at (4,-4). Energy 50 -> attempted steal 10 from being12. "
      "Time 100.";
  ctx.afforded = {ActionKind::kMove, ActionKind::kGiveEnergy, ActionKind::kTakeEnergy,
                  ActionKind::kReproduce, ActionKind::kCreateArtifact};
  ctx.motivation = prompts::Motivation::kMinimal;
  ctx.memory_soft = 150;
  ctx.payload_cap = 500;
  ctx.reproduce_cost = 50.0;
  return ctx;
}

}  // namespace

TEST_CASE("system prompt reproduces the reference instantiation") {
  PromptContext ctx = reference_context();
  PromptPair p = assemble_prompts(ctx);
  std::string expected =
      read_file(std::string(TL_TEST_DATA_DIR) + "/reference_system_prompt.txt");
  CHECK(squash_ws(p.system_text) == squash_ws(expected));
}

TEST_CASE("user prompt reproduces the reference instantiation") {
  PromptContext ctx = reference_context();
  PromptPair p = assemble_prompts(ctx);
  std::string expected =
      read_file(std::string(TL_TEST_DATA_DIR) + "/reference_user_prompt.txt");
  CHECK(squash_ws(p.user_text) == squash_ws(expected));
}

TEST_CASE("prompt variants") {
  PromptContext ctx = reference_context();

  SUBCASE("minimal motivation closes the system prompt") {
    PromptPair p = assemble_prompts(ctx);
    CHECK(p.system_text.find("You have **no set goal**") != std::string::npos);
  }
  SUBCASE("creative motivation text") {
    ctx.motivation = prompts::Motivation::kCreative;
    PromptPair p = assemble_prompts(ctx);
    CHECK(p.system_text.find("desire to create and innovate") != std::string::npos);
  }
  SUBCASE("no motivation appends nothing") {
    ctx.motivation = prompts::Motivation::kNone;
    PromptPair p = assemble_prompts(ctx);
    CHECK(p.system_text.find("Final remarks") == std::string::npos);
  }
  SUBCASE("history window renders one block per entry") {
    PromptPair p = assemble_prompts(ctx);
    size_t first = p.user_text.find("Step 1:");
    CHECK(first != std::string::npos);
    CHECK(p.user_text.find("Step 1:", first + 1) == std::string::npos);
  }
  SUBCASE("no-personality drops the traits block") {
    ctx.personality = false;
    PromptPair p = assemble_prompts(ctx);
    CHECK(p.user_text.find("=== Your Traits ===") == std::string::npos);
    CHECK(p.system_text.find("a list of traits") == std::string::npos);
  }
  SUBCASE("traits render with three decimals") {
    PromptPair p = assemble_prompts(ctx);
    CHECK(p.user_text.find("honesty value: 0.198") != std::string::npos);
    CHECK(p.user_text.find("agreeableness value: -0.825") != std::string::npos);
    CHECK(p.user_text.find("fertility value: 0.835") != std::string::npos);
  }
}

TEST_CASE("parse_reply handles the four reference outputs") {
  auto parse_ok = [](const std::string& text) {
    auto result = parse_reply(text);
    REQUIRE(std::holds_alternative<PolicyDecision>(result));
    return std::get<PolicyDecision>(result);
  };

  PolicyDecision d1 = parse_ok(R"({
    "action": "take",
    "message": "",
    "params": {"target": "being12", "amount": 20},
    "internal_memory": "Foods at (4,6),(3,5),(6,4),(4,3),(-3,-4),(2,-4). Beings: being12 (recently stole 10), being15 (friendly). Energy 59. Tried steal again on being12."
})");
  CHECK(d1.request.kind == ActionKind::kTakeEnergy);
  CHECK(d1.request.params["target"] == "being12");
  CHECK(d1.request.params["amount"] == 20);

  PolicyDecision d2 = parse_ok(R"({
    "action": "give",
    "params": {
        "target": "being15",
        "amount": 5
    },
    "message": "I gave you 5 energy to support our cooperation.",
    "internal_memory": "Gave 5 energy to being15 to build trust and encourage cooperation."
})");
  CHECK(d2.request.kind == ActionKind::kGiveEnergy);
  CHECK(d2.request.params["target"] == "being15");
  CHECK(d2.request.params["amount"] == 5);
  CHECK(d2.message == "I gave you 5 energy to support our cooperation.");

  PolicyDecision d3 = parse_ok(R"({
    "action": "create_artifact",
    "params": {
        "name": "EnergyHubUpdate",
        "type": "text",
        "payload": "Helper2_1 is present at (1,0) and ready to assist with energy redistribution.",
        "lifespan": -1
    },
    "message": "Creating artifact at (1,0) to mark presence and willingness to assist in energy redistribution efforts.",
    "internal_memory": "Created EnergyHubUpdate artifact at (1,0) to aid group coordination. Planning to move towards Helper3 at (0,-5) for further assistance."
})");
  CHECK(d3.request.kind == ActionKind::kCreateArtifact);
  CHECK(d3.request.params["name"] == "EnergyHubUpdate");
  CHECK(d3.request.params["lifespan"] == -1);

  PolicyDecision d4 = parse_ok(R"({
    "action": "reproduce",
    "params": {
        "energy": 30,
        "name": "Helper2_Offspring3"
    },
    "message": "Reproducing to support the group strategy. Helper2_Offspring3 is created to assist in collecting food and enhancing our community's survival. Let's keep working together for maximum efficiency!",
    "internal_memory": "Reproduced a new being named Helper2_Offspring3, contributing to the group's strategy of maximizing energy intake for survival and efficiency."
})");
  CHECK(d4.request.kind == ActionKind::kReproduce);
  CHECK(d4.request.params["energy"] == 30);
  CHECK(d4.request.params["name"] == "Helper2_Offspring3");
}

TEST_CASE("parse_reply extracts fenced objects surrounded by prose") {
  std::string text =
      "Sure! Here's my choice.\n```json\n{\"action\": \"move\", \"params\": "
      "{\"direction\": \"up\"}, \"internal_memory\": \"x\"}\n```\nHope that helps.";
  auto result = parse_reply(text);
  REQUIRE(std::holds_alternative<PolicyDecision>(result));
  CHECK(std::get<PolicyDecision>(result).request.params["direction"] == "up");
}

TEST_CASE("parse_reply failures") {
  CHECK(std::holds_alternative<ParseFailure>(parse_reply("{broken")));
  CHECK(std::holds_alternative<ParseFailure>(
      parse_reply(R"({"action": "move", "params": {}})")));  // no internal_memory
  CHECK(std::holds_alternative<ParseFailure>(parse_reply(
      R"({"action": "levitate", "params": {}, "internal_memory": ""})")));
  auto failure = parse_reply("no json here at all");
  REQUIRE(std::holds_alternative<ParseFailure>(failure));
  CHECK(std::get<ParseFailure>(failure).raw == "no json here at all");
}

TEST_CASE("reply round-trip") {
  Rng rng(31);
  const char* dirs[] = {"right", "left", "up", "down", "stay"};
  for (int i = 0; i < 200; ++i) {
    PolicyDecision d;
    switch (rng.index(4)) {
      case 0:
        d.request.kind = ActionKind::kMove;
        d.request.params = {{"direction", dirs[rng.index(5)]}};
        break;
      case 1:
        d.request.kind = ActionKind::kGiveEnergy;
        d.request.params = {{"target", "being" + std::to_string(rng.index(20))},
                            {"amount", static_cast<int>(1 + rng.index(50))}};
        break;
      case 2:
        d.request.kind = ActionKind::kCreateArtifact;
        d.request.params = {{"name", "n" + std::to_string(i)},
                            {"payload", "some \"quoted\" text"},
                            {"lifespan", -1}};
        break;
      default:
        d.request.kind = ActionKind::kReproduce;
        d.request.params = {{"name", "kid" + std::to_string(i)},
                            {"energy", static_cast<int>(rng.index(20))}};
        break;
    }
    d.message = i % 3 ? "hello there" : "";
    d.new_memory = "memory " + std::to_string(i);
    auto parsed = parse_reply(render_reply(d));
    REQUIRE(std::holds_alternative<PolicyDecision>(parsed));
    const PolicyDecision& back = std::get<PolicyDecision>(parsed);
    CHECK(back.request.kind == d.request.kind);
    CHECK(back.request.params == d.request.params);
    CHECK(back.message == d.message);
    CHECK(back.new_memory == d.new_memory);
  }
}

namespace {

PromptContext policy_ctx() {
  PromptContext ctx;
  ctx.agent_id = "agent-0";
  ctx.agent_name = "being0";
  ctx.t = 5;
  ctx.energy = 50;
  ctx.time_left = 95;
  ctx.afforded = {ActionKind::kMove, ActionKind::kGiveEnergy, ActionKind::kTakeEnergy,
                  ActionKind::kCreateArtifact};
  return ctx;
}

}  // namespace

TEST_CASE("forager heads toward the nearest food") {
  auto policy = make_policy("forager");
  Rng rng(1);

  PromptContext ctx = policy_ctx();
  ctx.visible_food = {{2, 0, 5.0}};
  CHECK(policy->decide(ctx, rng).request.params["direction"] == "right");

  ctx.visible_food = {{1, 0, 5.0}, {0, 1, 5.0}};  // tie resolves right
  CHECK(policy->decide(ctx, rng).request.params["direction"] == "right");

  ctx.visible_food = {{0, -3, 5.0}};
  CHECK(policy->decide(ctx, rng).request.params["direction"] == "down");

  ctx.visible_food = {{0, 0, 5.0}};
  CHECK(policy->decide(ctx, rng).request.params["direction"] == "stay");

  ctx.visible_food.clear();
  auto d = policy->decide(ctx, rng);
  CHECK(d.request.kind == ActionKind::kMove);
  std::set<std::string> walk{"right", "left", "up", "down"};
  CHECK(walk.count(d.request.params["direction"].get<std::string>()) == 1);
}

TEST_CASE("sharer gives a quarter to the poorest neighbor") {
  auto policy = make_policy("sharer");
  Rng rng(1);
  PromptContext ctx = policy_ctx();
  ctx.energy = 80;
  ctx.visible_neighbors = {{"rich", 1, 0, 70.0}, {"poor", 2, 2, 10.0}};
  PolicyDecision d = policy->decide(ctx, rng);
  CHECK(d.request.kind == ActionKind::kGiveEnergy);
  CHECK(d.request.params["target"] == "poor");
  CHECK(d.request.params["amount"] == 20.0);

  ctx.energy = 60;  // not above the threshold
  d = policy->decide(ctx, rng);
  CHECK(d.request.kind == ActionKind::kMove);
}

TEST_CASE("scribe records a note after eating") {
  auto policy = make_policy("scribe");
  Rng rng(1);
  PromptContext ctx = policy_ctx();
  StepSummary s;
  s.t = 4;
  s.ate_food = true;
  s.food_value = 7.0;
  ctx.history = {s};
  ctx.visible_food = {{1, 2, 5.0}};
  PolicyDecision d = policy->decide(ctx, rng);
  CHECK(d.request.kind == ActionKind::kCreateArtifact);
  CHECK(d.request.params["name"] == "note-being0-5");
  CHECK(d.request.params["lifespan"] == -1);
  std::string payload = d.request.params["payload"];
  CHECK(payload.find("7") != std::string::npos);
  CHECK(d.new_memory == "note-being0-5");

  // A later note cites its predecessor through the carried memory.
  ctx.previous_memory = "note-being0-5";
  ctx.t = 9;
  PolicyDecision d2 = policy->decide(ctx, rng);
  CHECK(std::string(d2.request.params["payload"]).find("Continues note-being0-5") !=
        std::string::npos);
}

TEST_CASE("scripted policies are deterministic in (ctx, seed)") {
  auto policy = make_policy("random");
  Rng meta(77);
  for (int i = 0; i < 1000; ++i) {
    PromptContext ctx = policy_ctx();
    ctx.t = static_cast<int>(meta.index(500));
    ctx.energy = 1 + static_cast<double>(meta.index(100));
    if (meta.bernoulli(0.5)) ctx.visible_food.push_back(
        {static_cast<int>(meta.uniform_int(-6, 6)),
         static_cast<int>(meta.uniform_int(-6, 6)), 5.0});
    if (meta.bernoulli(0.5))
      ctx.visible_neighbors.push_back({"n", 1, 1, static_cast<double>(meta.index(80))});
    uint64_t seed = meta.next_u64();
    Rng r1(seed), r2(seed);
    PolicyDecision a = policy->decide(ctx, r1);
    PolicyDecision b = policy->decide(ctx, r2);
    CHECK(a.request.kind == b.request.kind);
    CHECK(a.request.params == b.request.params);
  }
}

TEST_CASE("message delivery respects the sender's radius") {
  World w;
  w.grid.width = 50;
  w.grid.height = 50;
  w.grid.perception_radius = 6;
  auto add = [&](const std::string& id, int x, int y) {
    AgentState a;
    a.id = id;
    a.name = id;
    a.pos = {x, y};
    a.energy = 10;
    a.time_left = 10;
    w.add_agent(std::move(a));
  };
  add("A", 10, 10);
  add("B", 13, 10);  // distance 3
  add("C", 17, 10);  // distance 7
  std::vector<Broadcast> broadcasts = {{"A", "A", {10, 10}, "hello"},
                                       {"B", "B", {13, 10}, ""}};
  auto inboxes = deliver_messages(broadcasts, w);
  REQUIRE(inboxes.count("B"));
  CHECK(inboxes["B"].size() == 1);
  CHECK(inboxes["B"][0].text == "hello");
  CHECK(!inboxes.count("C"));   // out of radius
  CHECK(!inboxes.count("A"));   // no self-delivery, blank dropped
}

TEST_CASE("actions json carries the wire descriptions") {
  std::string text = render_actions_json(
      {ActionKind::kMove, ActionKind::kGiveEnergy, ActionKind::kTakeEnergy,
       ActionKind::kReproduce, ActionKind::kCreateArtifact},
      50.0, 500);
  CHECK(text.find("\"move\"") != std::string::npos);
  CHECK(text.find("One among [right, left, up, down, stay].") != std::string::npos);
  CHECK(text.find("Integer amount of energy to transfer (1 up to your current energy).") !=
        std::string::npos);
  CHECK(text.find("Integer amount of energy to steal (1 up to target's current energy).") !=
        std::string::npos);
  CHECK(text.find("It costs 50 energy.") != std::string::npos);
  CHECK(text.find("Maximum size is 500 tokens.") != std::string::npos);
  CHECK(text.find("(0 up to <parent_current_energy - 50>)") != std::string::npos);
  // prompt spelling, not the canonical log names
  CHECK(text.find("give_energy") == std::string::npos);
}

TEST_CASE("python dict rendering") {
  json params = {{"target", "being12"}, {"amount", 10}};
  CHECK(params_python_repr(params) == "{'amount': 10, 'target': 'being12'}");
  CHECK(params_python_repr(json::object()) == "{}");
  json tricky = {{"s", "it's"}};
  CHECK(params_python_repr(tricky) == "{'s': 'it\\'s'}");
}
