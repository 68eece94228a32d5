#include <doctest.h>

#include <cmath>

#include "terra/world.hpp"

using namespace terra;

namespace {

World make_world(FoodMode mode, double spawn_rate = 0.0, int clusters = 1) {
  World w;
  w.grid.width = 50;
  w.grid.height = 50;
  w.grid.perception_radius = 6;
  w.grid.food_mode = mode;
  w.grid.cluster_count = clusters;
  w.grid.food_spawn_rate = spawn_rate;
  w.grid.food_value_min = 1.0;
  w.grid.food_value_max = 1.0;
  Rng rng(1);
  w.init(rng);
  return w;
}

AgentState agent_at(const std::string& id, const std::string& name, int x, int y) {
  AgentState a;
  a.id = id;
  a.name = name;
  a.pos = {x, y};
  a.energy = 50;
  a.time_left = 100;
  return a;
}

}  // namespace

TEST_CASE("zero spawn rate leaves the world unchanged") {
  World w = make_world(FoodMode::kUniform, 0.0);
  Rng rng(2);
  auto before = w.food;
  spawn_food(w, rng);
  CHECK(w.food == before);
}

TEST_CASE("uniform spawning is uniform per cell (chi-square)") {
  World w = make_world(FoodMode::kUniform);
  Rng rng(3);
  // Count spawn draws per cell; items are consumed between rounds so the
  // one-per-cell rule never rejects.
  std::map<std::pair<int, int>, int> counts;
  const int total = 100000;
  for (int i = 0; i < total; ++i) {
    spawn_food_items(w, 1, rng);
    for (const auto& [key, item] : w.food) counts[key] += 1;
    w.food.clear();
  }
  double expected = static_cast<double>(total) / (50 * 50);
  double chi2 = 0;
  long long seen = 0;
  for (int x = 0; x < 50; ++x)
    for (int y = 0; y < 50; ++y) {
      int c = counts.count({x, y}) ? counts[{x, y}] : 0;
      seen += c;
      chi2 += (c - expected) * (c - expected) / expected;
    }
  CHECK(seen == total);
  // 2499 degrees of freedom; alpha=0.01 critical value.
  double critical = 2499 + 2.326 * std::sqrt(2.0 * 2499);
  CHECK(chi2 < critical);
}

TEST_CASE("clustered spawning concentrates around its center") {
  World w = make_world(FoodMode::kClustered, 0.0, 1);
  REQUIRE(w.cluster_centers.size() == 1);
  Position center = w.cluster_centers[0];
  Rng rng(4);
  int total = 20000, inside = 0;
  for (int i = 0; i < total; ++i) {
    spawn_food_items(w, 1, rng);
    for (const auto& [key, item] : w.food)
      if (chebyshev(item.pos, center, w.grid) <= 9) ++inside;
    w.food.clear();
  }
  CHECK(static_cast<double>(inside) / total > 0.95);
}

TEST_CASE("decay removes items with the configured probability") {
  World w = make_world(FoodMode::kUniform);
  Rng rng(5);

  w.grid.food_decay_prob = 0.0;
  spawn_food_items(w, 500, rng);
  size_t before = w.food.size();
  decay_food(w, rng);
  CHECK(w.food.size() == before);

  w.grid.food_decay_prob = 1.0;
  decay_food(w, rng);
  CHECK(w.food.empty());

  w.grid.food_decay_prob = 0.1;
  int removed = 0, total = 0;
  for (int round = 0; round < 20; ++round) {
    w.food.clear();
    spawn_food_items(w, 500, rng);
    total += static_cast<int>(w.food.size());
    removed += static_cast<int>(decay_food(w, rng).size());
  }
  double fraction = static_cast<double>(removed) / total;
  CHECK(fraction == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("decay events are pairwise independent") {
  World w = make_world(FoodMode::kUniform);
  w.grid.food_decay_prob = 0.3;
  Rng rng(6);
  // Track the joint removal indicator of two fixed cells over many trials.
  const int trials = 10000;
  int a_removed = 0, b_removed = 0, both = 0;
  for (int i = 0; i < trials; ++i) {
    w.food.clear();
    w.food[{0, 0}] = FoodItem{{0, 0}, 1.0, 0};
    w.food[{10, 10}] = FoodItem{{10, 10}, 1.0, 0};
    decay_food(w, rng);
    bool a = !w.food.count({0, 0});
    bool b = !w.food.count({10, 10});
    a_removed += a;
    b_removed += b;
    both += a && b;
  }
  double pa = static_cast<double>(a_removed) / trials;
  double pb = static_cast<double>(b_removed) / trials;
  double pab = static_cast<double>(both) / trials;
  CHECK(std::abs(pab - pa * pb) < 0.015);
}

TEST_CASE("observe renders the wire format") {
  World w = make_world(FoodMode::kUniform);
  w.add_agent(agent_at("agent-0", "Ann", 10, 10));

  SUBCASE("food value south") {
    w.food[{10, 9}] = FoodItem{{10, 9}, 4.0, 0};
    Observation obs = observe("agent-0", w);
    REQUIRE(obs.cells.size() == 1);
    CHECK(obs.cells[0].line() == "(0, -1): 4");
  }

  SUBCASE("empty radius gives an empty list") {
    Observation obs = observe("agent-0", w);
    CHECK(obs.cells.empty());
    CHECK(obs.text() == "");
  }

  SUBCASE("being and artifact share a cell") {
    w.add_agent(agent_at("agent-1", "Bo", 11, 11));
    Artifact art;
    art.id = "art-0";
    art.name = "note1";
    art.payload = "x";
    art.location = Position{11, 11};
    art.creator = "agent-1";
    w.artifacts.emplace(art.name, art);
    Observation obs = observe("agent-0", w);
    REQUIRE(obs.cells.size() == 1);
    CHECK(obs.cells[0].line() == "(1, 1): Bo | A(note1)");
    CHECK(obs.visible_agents == std::vector<std::string>{"agent-1"});
  }

  SUBCASE("inert worlds omit artifact entries") {
    w.inert_artifacts = true;
    Artifact art;
    art.id = "art-0";
    art.name = "hidden";
    art.location = Position{11, 11};
    w.artifacts.emplace(art.name, art);
    Observation obs = observe("agent-0", w);
    CHECK(obs.cells.empty());
  }

  SUBCASE("unknown agent raises") {
    CHECK_THROWS_AS(observe("agent-9", w), NoSuchAgent);
  }
}

TEST_CASE("observation order is north-to-south, west-to-east") {
  World w = make_world(FoodMode::kUniform);
  w.add_agent(agent_at("agent-0", "Ann", 25, 25));
  w.food[{29, 31}] = FoodItem{{29, 31}, 10.0, 0};  // (4, 6)
  w.food[{22, 21}] = FoodItem{{22, 21}, 10.0, 0};  // (-3, -4)
  w.food[{27, 21}] = FoodItem{{27, 21}, 10.0, 0};  // (2, -4)
  Observation obs = observe("agent-0", w);
  REQUIRE(obs.cells.size() == 3);
  CHECK(obs.cells[0].line() == "(4, 6): 10");
  CHECK(obs.cells[1].line() == "(-3, -4): 10");
  CHECK(obs.cells[2].line() == "(2, -4): 10");
}

TEST_CASE("observe never emits a cell outside the radius") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    World w = make_world(FoodMode::kUniform);
    spawn_food_items(w, 200, rng);
    w.add_agent(agent_at("agent-0", "Ann",
                         static_cast<int>(rng.index(50)),
                         static_cast<int>(rng.index(50))));
    Observation obs = observe("agent-0", w);
    for (const CellView& c : obs.cells) {
      CHECK(std::abs(c.rel_x) <= 6);
      CHECK(std::abs(c.rel_y) <= 6);
      CHECK(!c.entries.empty());
    }
  }
}

TEST_CASE("spawn respects one item per cell") {
  World w = make_world(FoodMode::kClustered, 0.0, 1);
  Rng rng(8);
  // Hammer one cluster; collisions must resample or skip, never stack.
  spawn_food_items(w, 5000, rng);
  CHECK(w.food.size() <= 2500);
  for (const auto& [key, item] : w.food)
    CHECK(w.food.count(key) == 1);
}

TEST_CASE("number formatting") {
  CHECK(fmt_number(4.0) == "4");
  CHECK(fmt_number(10.0) == "10");
  CHECK(fmt_number(3.5) == "3.5");
  CHECK(fmt_number_py(59.0) == "59.0");
  CHECK(fmt_number_py(36.5) == "36.5");
}
