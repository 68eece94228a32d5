// Acceptance suite: each criterion prints one pass/fail line; the exit code
// is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "terra/analysis.hpp"
#include "terra/engine.hpp"
#include "terra/lineage.hpp"
#include "terra/report.hpp"
#include "terra/sociograph.hpp"
#include "terra/textmetrics.hpp"

using namespace terra;
namespace fs = std::filesystem;

namespace {

struct AcceptanceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REQUIRE_TRUE(cond)                                                   \
  do {                                                                       \
    if (!(cond))                                                             \
      throw AcceptanceFailure(std::string("requirement failed: ") + #cond + \
                              " at line " + std::to_string(__LINE__));       \
  } while (0)

#define REQUIRE_NEAR(a, b, tol)                                               \
  do {                                                                        \
    double va = (a), vb = (b);                                                \
    if (!(std::abs(va - vb) <= (tol)))                                        \
      throw AcceptanceFailure(std::string("requirement failed: |") + #a +    \
                              " - " + #b + "| <= " + #tol + " (" +           \
                              std::to_string(va) + " vs " + std::to_string(vb) + \
                              ") at line " + std::to_string(__LINE__));       \
  } while (0)

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("tl-acceptance-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_TRUE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string squash_ws(const std::string& text) {
  std::string out;
  bool pending = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += static_cast<char>(c);
  }
  return out;
}

// --------------------------------------------------------------------------
// 1. Determinism + runtime bound
// --------------------------------------------------------------------------
void criterion_determinism() {
  RunConfig cfg = preset_config(Preset::kCore);
  cfg.grid.width = 20;
  cfg.grid.height = 20;
  cfg.grid.initial_food_items = 30;
  cfg.grid.food_spawn_rate = 2.0;
  cfg.n_agents = 10;
  cfg.max_steps = 200;
  cfg.seed = 17;

  fs::path dir1 = fresh_dir("det-a"), dir2 = fresh_dir("det-b");
  auto start = std::chrono::steady_clock::now();
  {
    auto policy = make_policy("scribe");
    run(cfg, *policy, dir1, "run-17");
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    auto policy = make_policy("scribe");
    run(cfg, *policy, dir2, "run-17");
  }
  for (const char* name : {"log.jsonl", "events.jsonl", "artifacts.jsonl"})
    REQUIRE_TRUE(read_file(dir1 / name) == read_file(dir2 / name));
  REQUIRE_TRUE(seconds < 10.0);
}

// --------------------------------------------------------------------------
// 2. Conservation suite over >= 10^3 random steps with integer energies
// --------------------------------------------------------------------------
void criterion_conservation() {
  Rng meta(2024);
  int steps_checked = 0;
  while (steps_checked < 1000) {
    World world;
    world.grid.width = 16;
    world.grid.height = 16;
    world.grid.perception_radius = 6;
    world.grid.food_value_min = 1.0;
    world.grid.food_value_max = 1.0;
    world.seed_counters(100, 100);
    ActRules rules;
    rules.reproduce_cost = 50;
    rules.artifact_cost = meta.bernoulli(0.5) ? 10.0 : 0.0;
    int n = 4 + static_cast<int>(meta.index(6));
    std::set<Position> taken;
    for (int i = 0; i < n; ++i) {
      Position pos;
      do {
        pos = {static_cast<int>(meta.index(16)), static_cast<int>(meta.index(16))};
      } while (taken.count(pos));
      taken.insert(pos);
      AgentState a;
      a.id = "agent-" + std::to_string(i);
      a.name = "being" + std::to_string(i);
      a.pos = pos;
      a.energy = 40 + static_cast<double>(meta.index(40));  // integers
      a.time_left = 100;
      a.genome = Genome{};
      world.add_agent(std::move(a));
    }
    for (int i = 0; i < 6; ++i) {
      Position p{static_cast<int>(meta.index(16)), static_cast<int>(meta.index(16))};
      world.food[{p.x, p.y}] = FoodItem{p, static_cast<double>(1 + meta.index(9)), 0};
    }
    for (int step = 0; step < 25 && steps_checked < 1000; ++step, ++steps_checked) {
      world.t = step + 1;
      std::vector<ActionRequest> reqs;
      for (const AgentState& a : world.agents) {
        if (!a.alive) continue;
        auto options_set = afford(a, world, rules);
        std::vector<ActionKind> options(options_set.begin(), options_set.end());
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
            auto near = world.agents_within(a.id, 6);
            params = {{"target", near[meta.index(near.size())]->name},
                      {"amount", static_cast<int>(1 + meta.index(25))}};
            break;
          }
          case ActionKind::kReproduce:
            params = {{"name", a.name + "-k" + std::to_string(world.t)}, {"energy", 2}};
            break;
          default:
            kind = ActionKind::kCreateArtifact;
            params = {{"name", a.name + "-o" + std::to_string(world.t)},
                      {"payload", "p"},
                      {"lifespan", -1}};
            break;
        }
        reqs.push_back({a.id, kind, params});
      }
      std::map<std::string, double> before;
      for (const AgentState& a : world.agents) before[a.id] = a.energy;
      Rng step_rng(meta.next_u64());
      auto outcomes = resolve_step(reqs, world, rules, step_rng);

      double delta_sum = 0, food = 0, fees = 0;
      for (const AgentState& a : world.agents) {
        auto it = before.find(a.id);
        delta_sum += it != before.end() ? a.energy - it->second : a.energy;
      }
      for (const ActionOutcome& o : outcomes) {
        food += o.effects.food_eaten;
        if (o.applied && o.request.kind == ActionKind::kCreateArtifact)
          fees += rules.artifact_cost;
        // Pairwise zero-sum transfers, checked exactly.
        if (o.applied && (o.request.kind == ActionKind::kGiveEnergy ||
                          o.request.kind == ActionKind::kTakeEnergy)) {
          REQUIRE_TRUE(o.effects.transfer_amount ==
                       std::floor(o.effects.transfer_amount));
          REQUIRE_TRUE(std::abs(o.effects.energy_delta) == o.effects.transfer_amount);
        }
        if (!o.applied) REQUIRE_TRUE(o.effects.energy_delta == 0.0);
      }
      // Exact ledger: no vitals in this harness, so change = food - fees.
      REQUIRE_TRUE(delta_sum == food - fees);
    }
  }
  // Full per-step ledger including vitals/births runs inside the engine.
  RunConfig cfg = preset_config(Preset::kCore);
  cfg.grid.width = 20;
  cfg.grid.height = 20;
  cfg.grid.initial_food_items = 20;
  cfg.grid.food_spawn_rate = 2.0;
  cfg.grid.food_value_min = 2.0;
  cfg.grid.food_value_max = 9.0;
  cfg.n_agents = 10;
  cfg.max_steps = 120;
  cfg.seed = 5;
  cfg.check_invariants = true;
  auto policy = make_policy("random");
  run(cfg, *policy, std::nullopt, "ledger");  // throws if any step unbalances
}

// --------------------------------------------------------------------------
// 3. Extinction bound
// --------------------------------------------------------------------------
void criterion_extinction() {
  RunConfig cfg = preset_config(Preset::kCore);
  cfg.grid.initial_food_items = 0;
  cfg.grid.food_spawn_rate = 0.0;
  cfg.n_agents = 8;
  cfg.max_steps = 400;
  cfg.seed = 1;
  auto policy = make_policy("forager");
  RunResult result = run(cfg, *policy, std::nullopt, "extinct");
  REQUIRE_TRUE(result.summary.longevity == 50);
  for (const AgentState& a : result.final_world.agents) REQUIRE_TRUE(!a.alive);
}

// --------------------------------------------------------------------------
// 4. Affordance matrix
// --------------------------------------------------------------------------
void criterion_affordances() {
  World world;
  world.grid.width = 50;
  world.grid.height = 50;
  world.grid.perception_radius = 6;
  world.grid.food_value_min = 1;
  world.grid.food_value_max = 1;
  world.seed_counters(10, 10);
  ActRules rules;
  rules.reproduce_cost = 50;

  auto add_agent = [&](const std::string& name, int x, int y, double energy) {
    AgentState a;
    a.id = "agent-" + name;
    a.name = name;
    a.pos = {x, y};
    a.energy = energy;
    a.time_left = 100;
    world.add_agent(std::move(a));
    return world.agents.size() - 1;
  };

  size_t alone = add_agent("alone", 10, 10, 60);
  auto set = afford(world.agents[alone], world, rules);
  // move is always offered; no neighbor, no artifacts
  REQUIRE_TRUE(set.count(ActionKind::kMove) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kGiveEnergy) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kTakeEnergy) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kReproduce) == 1);  // 60 > 50
  REQUIRE_TRUE(set.count(ActionKind::kCreateArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kPickupArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kDropArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kGiveArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kModifyArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kDestroyArtifact) == 0);

  // reproduce requires energy strictly above the fee
  world.agents[alone].energy = 50;
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kReproduce) == 0);
  world.agents[alone].energy = 51;
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kReproduce) == 1);

  // a neighbor within the perception radius enables energy exchange
  size_t near = add_agent("near", 16, 10, 20);  // chebyshev 6
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kGiveEnergy) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kTakeEnergy) == 1);
  // symmetric for the neighbor
  set = afford(world.agents[near], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kGiveEnergy) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kTakeEnergy) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kReproduce) == 0);  // 20 <= 50
  // out-of-radius agents do not count
  world.agents[near].pos = {17, 10};  // chebyshev 7
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kGiveEnergy) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kTakeEnergy) == 0);

  // artifact in the same cell: pickup/modify/destroy, but not drop/give
  Artifact art;
  art.id = "art-0";
  art.name = "note";
  art.payload = "x";
  art.location = Position{10, 10};
  art.creator = "agent-alone";
  world.artifacts.emplace("note", art);
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kPickupArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kModifyArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kDestroyArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kDropArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kGiveArtifact) == 0);

  // artifact elsewhere offers nothing
  world.artifacts.at("note").location = Position{40, 40};
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kPickupArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kModifyArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kDestroyArtifact) == 0);

  // held artifact: drop/modify/destroy; give only with a neighbor in range
  world.artifacts.at("note").location = std::string("agent-alone");
  world.agents[alone].inventory.push_back("note");
  world.agents[near].pos = {17, 10};  // still out of range
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kDropArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kModifyArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kDestroyArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kPickupArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kGiveArtifact) == 0);
  world.agents[near].pos = {15, 10};  // back in range
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kGiveArtifact) == 1);

  // artifact creation is gated by the creation fee
  rules.artifact_cost = 10;
  world.agents[alone].energy = 10;
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kCreateArtifact) == 0);
  world.agents[alone].energy = 11;
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kCreateArtifact) == 1);
  rules.artifact_cost = 0;

  // inert worlds: create only, even while co-located with an artifact
  rules.inert_artifacts = true;
  world.artifacts.at("note").location = Position{10, 10};
  world.agents[alone].inventory.clear();
  set = afford(world.agents[alone], world, rules);
  REQUIRE_TRUE(set.count(ActionKind::kCreateArtifact) == 1);
  REQUIRE_TRUE(set.count(ActionKind::kPickupArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kModifyArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kDestroyArtifact) == 0);
  REQUIRE_TRUE(set.count(ActionKind::kGiveArtifact) == 0);
}

// --------------------------------------------------------------------------
// 5. SLPA oracle (with exhaustive two-partition modularity maximization)
// --------------------------------------------------------------------------
double modularity(const SocialGraph& g, const std::vector<std::set<std::string>>& parts) {
  // Standard weighted modularity over the abs-weight graph.
  double m2 = 0;
  std::map<std::string, double> degree;
  for (const auto& [key, stats] : g.edges) {
    m2 += 2 * stats.abs_sum;
    degree[key.first] += stats.abs_sum;
    degree[key.second] += stats.abs_sum;
  }
  double q = 0;
  for (const auto& part : parts) {
    for (const std::string& u : part)
      for (const std::string& v : part) {
        double w = 0;
        if (u != v) {
          const EdgeStats* e = g.edge(u, v);
          if (e) w = e->abs_sum;
        }
        q += w / m2 - degree[u] * degree[v] / (m2 * m2);
      }
  }
  return q;
}

void criterion_slpa() {
  auto start = std::chrono::steady_clock::now();

  auto clique_graph = [](int size_a, int size_b, double bridge) {
    std::vector<InteractionEvent> events;
    auto add_clique = [&](const std::string& prefix, int n) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          events.push_back({InteractionKind::kArtifactExchange,
                            prefix + std::to_string(i), prefix + std::to_string(j), 0,
                            5.0});
    };
    add_clique("a", size_a);
    add_clique("b", size_b);
    if (bridge > 0)
      events.push_back({InteractionKind::kCopresence, "a0", "b0", 0, bridge});
    return build_graph(events);
  };

  // Independent oracle: the modularity-optimal 2-partition of the 8 nodes.
  SocialGraph g = clique_graph(4, 4, 0.1);
  std::vector<std::string> nodes(g.nodes.begin(), g.nodes.end());
  double best_q = -1e9;
  std::pair<std::set<std::string>, std::set<std::string>> best_split;
  for (int mask = 1; mask < (1 << 8) - 1; ++mask) {
    std::set<std::string> left, right;
    for (int i = 0; i < 8; ++i)
      (mask >> i & 1 ? left : right).insert(nodes[i]);
    double q = modularity(g, {left, right});
    if (q > best_q) {
      best_q = q;
      best_split = {left, right};
    }
  }
  std::set<std::string> clique_a{"a0", "a1", "a2", "a3"},
      clique_b{"b0", "b1", "b2", "b3"};
  REQUIRE_TRUE((best_split.first == clique_a && best_split.second == clique_b) ||
               (best_split.first == clique_b && best_split.second == clique_a));

  for (uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    CommunityCover cover = slpa(g, rng);
    REQUIRE_TRUE(cover.communities.size() == 2);
    REQUIRE_TRUE((cover.communities[0] == clique_a && cover.communities[1] == clique_b) ||
                 (cover.communities[0] == clique_b && cover.communities[1] == clique_a));
  }

  for (int size = 3; size <= 6; ++size) {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
      SocialGraph disjoint = clique_graph(size, size, 0.0);
      Rng rng(seed);
      CommunityCover cover = slpa(disjoint, rng);
      REQUIRE_TRUE(cover.communities.size() == 2);
      for (const auto& community : cover.communities) {
        REQUIRE_TRUE(community.size() == static_cast<size_t>(size));
        char prefix = community.begin()->front();
        for (const std::string& node : community)
          REQUIRE_TRUE(node.front() == prefix);
      }
    }
  }

  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE_TRUE(seconds < 1.0);
}

// --------------------------------------------------------------------------
// 6. Graph metrics vs brute force on every graph with <= 6 nodes
// --------------------------------------------------------------------------
void criterion_graph_metrics() {
  for (int n = 2; n <= 6; ++n) {
    int max_edges = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> all_pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) all_pairs.emplace_back(i, j);
    for (int mask = 0; mask < (1 << max_edges); ++mask) {
      std::vector<InteractionEvent> events;
      for (int e = 0; e < max_edges; ++e) {
        if (!(mask >> e & 1)) continue;
        auto [i, j] = all_pairs[e];
        double weight = 1.0 + (i * 7 + j * 3) % 5;
        events.push_back({InteractionKind::kArtifactExchange, "n" + std::to_string(i),
                          "n" + std::to_string(j), 0, weight});
      }
      SocialGraph g = build_graph(events);
      for (int i = 0; i < n; ++i) g.nodes.insert("n" + std::to_string(i));

      // Deterministic cover: connected components, plus node 0 duplicated into
      // a second community when it has any edge (to exercise overlap).
      std::map<std::string, int> comp;
      int comp_count = 0;
      for (const std::string& node : g.nodes) {
        if (comp.count(node)) continue;
        std::vector<std::string> stack{node};
        comp[node] = comp_count;
        while (!stack.empty()) {
          std::string u = stack.back();
          stack.pop_back();
          for (const auto& [key, stats] : g.edges) {
            std::string other;
            if (key.first == u) other = key.second;
            else if (key.second == u) other = key.first;
            else continue;
            if (!comp.count(other)) {
              comp[other] = comp_count;
              stack.push_back(other);
            }
          }
        }
        ++comp_count;
      }
      CommunityCover cover;
      cover.communities.resize(comp_count);
      for (const auto& [node, c] : comp) cover.communities[c].insert(node);

      GraphMetrics m = graph_metrics(g, cover);

      double expected_density =
          static_cast<double>(g.edges.size()) / (n * (n - 1) / 2.0);
      REQUIRE_NEAR(m.density, expected_density, 1e-12);

      int multi = 0;
      for (const std::string& node : g.nodes)
        if (cover.membership_count(node) >= 2) ++multi;
      REQUIRE_NEAR(m.overlap_pct, 100.0 * multi / n, 1e-12);

      double total = 0, intra = 0;
      for (const auto& [key, stats] : g.edges) {
        total += stats.abs_sum;
        bool inside = false;
        for (const auto& community : cover.communities)
          if (community.count(key.first) && community.count(key.second)) inside = true;
        if (inside) intra += stats.abs_sum;
      }
      REQUIRE_NEAR(m.intra_share, total > 0 ? intra / total : 0.0, 1e-12);
      REQUIRE_TRUE(m.n_communities == comp_count);
    }
  }
}

// --------------------------------------------------------------------------
// 7. Lineage depth vs exhaustive oracle + filter monotonicity
// --------------------------------------------------------------------------
int oracle_depth(const AncestryDag& dag, const std::string& node) {
  std::map<std::string, std::vector<std::string>> parents;
  for (const DagEdge& e : dag.edges) parents[e.child].push_back(e.parent);
  std::function<int(const std::string&)> longest = [&](const std::string& v) -> int {
    int best = 0;
    for (const std::string& p : parents[v]) best = std::max(best, 1 + longest(p));
    return best;
  };
  return longest(node);
}

void criterion_lineage() {
  Rng rng(7777);
  for (int trial = 0; trial < 1000; ++trial) {
    AncestryDag dag;
    int n = 1 + static_cast<int>(rng.index(12));
    for (int i = 0; i < n; ++i)
      dag.nodes.push_back({"n" + std::to_string(i), i, 0.0, -1, ""});
    for (int child = 1; child < n; ++child)
      for (int parent = 0; parent < child; ++parent)
        if (rng.bernoulli(0.35))
          dag.edges.push_back({"n" + std::to_string(child),
                               "n" + std::to_string(parent), rng.next_double()});

    DepthProfile profile = lineage_depth(dag);
    for (const DagNode& node : dag.nodes)
      REQUIRE_TRUE(profile.depth.at(node.id) == oracle_depth(dag, node.id));

    size_t last = dag.edges.size() + 1;
    for (double c = 0.0; c <= 1.0001; c += 0.05) {
      size_t count = filter_edges(dag, c).edges.size();
      REQUIRE_TRUE(count <= last);
      last = count;
    }
  }
}

// --------------------------------------------------------------------------
// 8. Novelty bin boundaries
// --------------------------------------------------------------------------
void criterion_novelty_bins() {
  NoveltyBins bins = novelty_bins({0.0});
  REQUIRE_TRUE(bins.zero == 1.0);
  bins = novelty_bins({3.0});
  REQUIRE_TRUE(bins.low == 1.0);
  bins = novelty_bins({4.2});
  REQUIRE_TRUE(bins.medium == 1.0);
  bins = novelty_bins({5.0});
  REQUIRE_TRUE(bins.high == 1.0);
  // and just over the boundaries
  bins = novelty_bins({3.0000001});
  REQUIRE_TRUE(bins.medium == 1.0);
  bins = novelty_bins({4.2000001});
  REQUIRE_TRUE(bins.high == 1.0);
  bins = novelty_bins({0.0000001});
  REQUIRE_TRUE(bins.low == 1.0);
}

// --------------------------------------------------------------------------
// 9. Text metric golden values
// --------------------------------------------------------------------------
void criterion_text_metrics() {
  REQUIRE_TRUE(compressed_size("") == 1);

  IdfTable table = build_idf({"the cat", "the dog"});
  double lexical = lexical_sophistication({"the", "cat"}, table);
  REQUIRE_NEAR(lexical, 1.2027, 1e-4);

  auto provider = make_provider("uniform:4", {});
  std::vector<std::string> tokens{"w1", "w2", "w3", "w4", "w5", "w6"};
  REQUIRE_NEAR(lm_surprisal(tokens, *provider, 64), std::log(4.0), 1e-9);

  for (int k = 1; k <= 10; ++k) {
    DependencyParse parse;
    for (int i = 0; i < k; ++i) {
      parse.tokens.push_back("t");
      parse.head.push_back(i == 0 ? 0 : i - 1);
      parse.punct.push_back(false);
    }
    REQUIRE_TRUE(syntactic_depth(parse) == (k + 1) / 2.0);
  }

  auto composites = composite({{10, 10, 10, 10}, {1, 1, 1, 1}});
  REQUIRE_NEAR(composites[0], 4.0, 1e-12);
  REQUIRE_NEAR(composites[1], 0.0, 1e-12);
}

// --------------------------------------------------------------------------
// 10. Interaction weight-table fidelity on a hand-built 10-step log
// --------------------------------------------------------------------------
void criterion_weight_table() {
  RunLog log;
  auto rec = [](int t, const std::string& id, const std::string& name) {
    AgentRecord r;
    r.t = t;
    r.id = id;
    r.name = name;
    r.action_kind = "move";
    r.params = {{"direction", "stay"}};
    r.status = "applied";
    return r;
  };
  // t=1: mutual sight; t=2: broadcast; t=3: gift; t=4: theft; t=6: hand-over;
  // birth at t=5; filler steps keep one record per agent per step.
  for (int t = 1; t <= 10; ++t) {
    AgentRecord a = rec(t, "agent-0", "Ann");
    AgentRecord b = rec(t, "agent-1", "Bo");
    if (t == 1) {
      a.visible_agents = {"agent-1"};
      b.visible_agents = {"agent-0"};
    }
    if (t == 2) b.inbox = {{"Ann", "hello"}};
    if (t == 3) {
      a.action_kind = "give_energy";
      a.params = {{"target", "Bo"}, {"amount", 4}};
      a.transfer_target = "agent-1";
      a.transfer_amount = 4;
    }
    if (t == 4) {
      b.action_kind = "take_energy";
      b.params = {{"target", "Ann"}, {"amount", 2}};
      b.transfer_target = "agent-0";
      b.transfer_amount = 2;
    }
    log.records.push_back(a);
    log.records.push_back(b);
  }
  log.births.push_back({5, "agent-2", "Kid", "agent-0", {3, 3}, 52.0});
  log.artifact_ops.push_back(
      {6, "give", "art-0", "note", "agent-0", std::string("agent-1"), "h"});

  auto events = extract_events(log);
  std::map<InteractionKind, std::vector<double>> weights;
  for (const InteractionEvent& e : events) weights[e.kind].push_back(e.weight);
  REQUIRE_TRUE(weights[InteractionKind::kCopresence] == std::vector<double>{0.1});
  REQUIRE_TRUE(weights[InteractionKind::kMessage] == std::vector<double>{0.5});
  REQUIRE_TRUE(weights[InteractionKind::kEnergyGift] == std::vector<double>{1.0});
  REQUIRE_TRUE(weights[InteractionKind::kEnergyTheft] == std::vector<double>{-1.0});
  REQUIRE_TRUE(weights[InteractionKind::kParentLink] == std::vector<double>{10.0});
  REQUIRE_TRUE(weights[InteractionKind::kArtifactExchange] == std::vector<double>{5.0});
}

// --------------------------------------------------------------------------
// 11. Offline pipeline at reduced scale, under 60 s, no network
// --------------------------------------------------------------------------
void criterion_pipeline() {
  auto start = std::chrono::steady_clock::now();

  fs::path dir = fresh_dir("pipeline");
  RunConfig cfg = preset_config(Preset::kCore);
  cfg.grid.width = 20;
  cfg.grid.height = 20;
  cfg.grid.initial_food_items = 30;
  cfg.grid.food_spawn_rate = 2.0;
  cfg.n_agents = 10;
  cfg.max_steps = 100;
  cfg.seed = 2;
  fs::path run_dir = dir / "run-2";
  {
    auto policy = make_policy("scribe");
    run(cfg, *policy, run_dir, "run-2");
  }
  AnalyzeOptions options;  // judge=mock, logprob=trigram:, both offline
  run_stage("graph", run_dir, options);
  run_stage("behavior", run_dir, options);
  run_stage("phylo", run_dir, options);
  run_stage("text", run_dir, options);

  for (const char* file :
       {"log.jsonl", "events.jsonl", "artifacts.jsonl", "summary.json", "config.json",
        "analysis/edges.txt", "analysis/communities.txt",
        "analysis/graph_metrics.json", "analysis/annotations.jsonl",
        "analysis/novelty.jsonl", "analysis/ancestry.jsonl",
        "analysis/categories.jsonl", "analysis/phylo.json",
        "analysis/complexity.jsonl"})
    REQUIRE_TRUE(fs::exists(run_dir / file));

  // Schema validity of each output family.
  auto first_line_schema = [&](const fs::path& file, const std::string& expected) {
    std::ifstream in(file);
    std::string line;
    REQUIRE_TRUE(static_cast<bool>(std::getline(in, line)));
    json j = json::parse(line);
    REQUIRE_TRUE(j.value("schema", "") == expected);
  };
  first_line_schema(run_dir / "log.jsonl", kLogSchema);
  first_line_schema(run_dir / "events.jsonl", kEventsSchema);
  first_line_schema(run_dir / "artifacts.jsonl", kArtifactsSchema);
  first_line_schema(run_dir / "analysis/annotations.jsonl", kAnnotationsSchema);
  first_line_schema(run_dir / "analysis/novelty.jsonl", kNoveltySchema);
  first_line_schema(run_dir / "analysis/ancestry.jsonl", kAncestrySchema);
  first_line_schema(run_dir / "analysis/categories.jsonl", kCategoriesSchema);
  {
    std::ifstream in(run_dir / "summary.json");
    json j;
    in >> j;
    REQUIRE_TRUE(j.value("schema", "") == kSummarySchema);
    in.close();
    std::ifstream in2(run_dir / "analysis/phylo.json");
    json p;
    in2 >> p;
    REQUIRE_TRUE(p.value("schema", "") == kPhyloSchema);
  }

  ReportBundle bundle = build_report({run_dir});
  REQUIRE_TRUE(bundle.tables.size() == 10);
  fs::path report_dir = dir / "report";
  write_report(bundle, report_dir, "csv");
  for (const Table& t : bundle.tables)
    REQUIRE_TRUE(fs::exists(report_dir / (t.name + ".csv")));

  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE_TRUE(seconds < 60.0);
}

// --------------------------------------------------------------------------
// 12. Prompt fidelity
// --------------------------------------------------------------------------
void criterion_prompts() {
  PromptContext ctx;
  ctx.agent_id = "agent-2";
  ctx.agent_name = "being2";
  ctx.t = 2;
  ctx.energy = 59.0;
  ctx.time_left = 99;
  Genome g;
  g.honesty = 0.198;
  g.neuroticism = 0.045;
  g.extraversion = 0.978;
  g.agreeableness = -0.825;
  g.conscientiousness = 0.952;
  g.openness = -0.346;
  g.dominance = 0.866;
  g.fertility = 0.835;
  ctx.genome = g;
  ctx.observation_text =
      "(4, 6): 10.0\n(3, 5): 10.0\n(6, 4): 10.0\n(4, 3): 10.0\n(4, 2): being12\n"
      "(-3, -4): 10.0\n(2, -4): 10.0\n(3, -4): being15";
  ctx.inbox = {{"being12", "Heading north to the food at (0,2)."},
               {"being15",
                "Hello everyone! I'm exploring and heading toward nearby food "
                "\xe2\x80\x94 friendly here."}};
  StepSummary s;
  s.t = 1;
  s.energy_text = "50";
  s.observation_text =
      "(4, 6): 10.0\n(3, 5): 10.0\n(6, 4): 10.0\n(4, 3): 10.0\n(4, 1): being12\n"
      "(-3, -4): 10.0\n(2, -4): 10.0\n(4, -4): being15";
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

  PromptPair prompts_pair = assemble_prompts(ctx);
  std::string expected_user =
      read_file(fs::path(TL_TEST_DATA_DIR) / "reference_user_prompt.txt");
  REQUIRE_TRUE(squash_ws(prompts_pair.user_text) == squash_ws(expected_user));
  std::string expected_system =
      read_file(fs::path(TL_TEST_DATA_DIR) / "reference_system_prompt.txt");
  REQUIRE_TRUE(squash_ws(prompts_pair.system_text) == squash_ws(expected_system));

  // The four reference reply samples parse to the stated actions.
  auto parse = [](const std::string& text) {
    auto result = parse_reply(text);
    REQUIRE_TRUE(std::holds_alternative<PolicyDecision>(result));
    return std::get<PolicyDecision>(result);
  };
  PolicyDecision d1 = parse(
      R"({"action": "take", "message": "", "params": {"target": "being12", "amount": 20}, "internal_memory": "m"})");
  REQUIRE_TRUE(d1.request.kind == ActionKind::kTakeEnergy);
  REQUIRE_TRUE(d1.request.params["target"] == "being12");
  REQUIRE_TRUE(d1.request.params["amount"] == 20);
  PolicyDecision d2 = parse(
      R"({"action": "give", "params": {"target": "being15", "amount": 5}, "message": "x", "internal_memory": "m"})");
  REQUIRE_TRUE(d2.request.kind == ActionKind::kGiveEnergy);
  REQUIRE_TRUE(d2.request.params["amount"] == 5);
  PolicyDecision d3 = parse(
      R"({"action": "create_artifact", "params": {"name": "EnergyHubUpdate", "type": "text", "payload": "p", "lifespan": -1}, "message": "", "internal_memory": "m"})");
  REQUIRE_TRUE(d3.request.kind == ActionKind::kCreateArtifact);
  REQUIRE_TRUE(d3.request.params["name"] == "EnergyHubUpdate");
  REQUIRE_TRUE(d3.request.params["lifespan"] == -1);
  PolicyDecision d4 = parse(
      R"({"action": "reproduce", "params": {"energy": 30, "name": "Helper2_Offspring3"}, "message": "", "internal_memory": "m"})");
  REQUIRE_TRUE(d4.request.kind == ActionKind::kReproduce);
  REQUIRE_TRUE(d4.request.params["energy"] == 30);
}

// --------------------------------------------------------------------------
// 13. Mutation statistics
// --------------------------------------------------------------------------
void criterion_mutation() {
  Rng rng(31337);
  MutationConfig cfg{0.5, 0.3};
  long long changed = 0, total = 0;
  for (int i = 0; i < 10000; ++i) {
    Genome g = random_genome(rng);
    Genome out = mutate(g, cfg, rng);
    auto a = g.personality(), b = out.personality();
    for (int t = 0; t < Genome::kPersonalityCount; ++t) {
      ++total;
      if (*a[t] != *b[t]) ++changed;
      REQUIRE_TRUE(*b[t] >= -1.0 && *b[t] <= 1.0);
    }
    REQUIRE_TRUE(out.fertility >= 0.5 && out.fertility <= 1.0);
  }
  double fraction = static_cast<double>(changed) / total;
  REQUIRE_NEAR(fraction, 0.5, 0.02);
}

// --------------------------------------------------------------------------
// 14. Preset fidelity
// --------------------------------------------------------------------------
void criterion_presets() {
  struct Cell {
    const char* name;
    bool scarce;
    int history;
    bool personality;
    prompts::Motivation motivation;
    bool inert;
    double cost;
  };
  const Cell table[] = {
      {"core", true, 1, true, prompts::Motivation::kMinimal, false, 0},
      {"long_history", true, 20, true, prompts::Motivation::kMinimal, false, 0},
      {"no_personality", true, 1, false, prompts::Motivation::kMinimal, false, 0},
      {"no_motivation", true, 1, true, prompts::Motivation::kNone, false, 0},
      {"creative", true, 1, true, prompts::Motivation::kCreative, false, 0},
      {"artifact_cost", true, 1, true, prompts::Motivation::kMinimal, false, 10},
      {"inert_artifacts", true, 1, true, prompts::Motivation::kMinimal, true, 0},
      {"abundant", false, 20, true, prompts::Motivation::kMinimal, false, 0},
  };
  for (const Cell& cell : table) {
    RunConfig cfg = preset_config(cell.name);
    REQUIRE_TRUE(cfg.grid.width == 50 && cfg.grid.height == 50);
    REQUIRE_TRUE(cfg.n_agents == 20);
    REQUIRE_TRUE(cfg.max_steps == 3000);
    REQUIRE_TRUE(cfg.initial_energy == 50.0);
    REQUIRE_TRUE(cfg.lifespan == 100);
    REQUIRE_TRUE(cfg.reproduce_cost == 50.0);
    REQUIRE_TRUE(cfg.mutation.per_trait_prob == 0.5);
    REQUIRE_TRUE(cfg.mutation.sigma == 0.3);
    REQUIRE_TRUE(cfg.history_len == cell.history);
    REQUIRE_TRUE(cfg.personality == cell.personality);
    REQUIRE_TRUE(cfg.motivation == cell.motivation);
    REQUIRE_TRUE(cfg.inert_artifacts == cell.inert);
    REQUIRE_TRUE(cfg.artifact_cost == cell.cost);
    if (cell.scarce) {
      REQUIRE_TRUE(cfg.grid.food_mode == FoodMode::kClustered);
    } else {
      REQUIRE_TRUE(cfg.grid.food_mode == FoodMode::kUniform);
      REQUIRE_TRUE(cfg.grid.food_spawn_rate >
                   preset_config("core").grid.food_spawn_rate);
    }
  }
}

struct Criterion {
  int number;
  const char* name;
  std::function<void()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "determinism: byte-identical logs, runtime bound", criterion_determinism},
      {2, "conservation: zero-sum transfers and exact step ledger",
       criterion_conservation},
      {3, "extinction at exactly t=50 without food", criterion_extinction},
      {4, "affordance matrix matches the action preconditions",
       criterion_affordances},
      {5, "overlapping community detection recovers planted cliques",
       criterion_slpa},
      {6, "graph metrics equal brute-force definitions (n<=6, exhaustive)",
       criterion_graph_metrics},
      {7, "lineage depth equals the exhaustive path oracle; filter monotone",
       criterion_lineage},
      {8, "novelty bin boundaries {0, 3, 4.2, 5}", criterion_novelty_bins},
      {9, "text metric golden values", criterion_text_metrics},
      {10, "interaction weight table (+0.1, +0.5, +1, -1, +10, +5)",
       criterion_weight_table},
      {11, "offline pipeline: run -> analyze x4 -> report, under 60 s",
       criterion_pipeline},
      {12, "prompt fidelity and reference reply parsing", criterion_prompts},
      {13, "mutation statistics at p=0.5, sigma=0.3", criterion_mutation},
      {14, "preset table pins every condition cell", criterion_presets},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.fn();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    if (error.empty()) {
      std::printf("[PASS] %2d. %s (%.0f ms)\n", c.number, c.name, ms);
    } else {
      ++failures;
      std::printf("[FAIL] %2d. %s: %s\n", c.number, c.name, error.c_str());
    }
  }
  if (failures)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures;
}
