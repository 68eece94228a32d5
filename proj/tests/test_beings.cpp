#include <doctest.h>

#include <cmath>
#include <set>

#include "terra/beings.hpp"

using namespace terra;

TEST_CASE("sampled genomes match uniform moments") {
  Rng rng(101);
  const int n = 10000;
  double trait_sum[Genome::kPersonalityCount] = {0};
  double fertility_sum = 0;
  for (int i = 0; i < n; ++i) {
    Genome g = random_genome(rng);
    auto traits = g.personality();
    for (int t = 0; t < Genome::kPersonalityCount; ++t) trait_sum[t] += *traits[t];
    fertility_sum += g.fertility;
    for (const double* t : traits) {
      CHECK(*t >= -1.0);
      CHECK(*t <= 1.0);
    }
    CHECK(g.fertility >= 0.5);
    CHECK(g.fertility <= 1.0);
  }
  for (double s : trait_sum) CHECK(std::abs(s / n) < 0.03);
  CHECK(std::abs(fertility_sum / n - 0.75) < 0.02);
}

TEST_CASE("mutate with zero sigma is identity") {
  Rng rng(3);
  Genome g = random_genome(rng);
  MutationConfig cfg{1.0, 0.0};
  Genome out = mutate(g, cfg, rng);
  auto a = g.personality(), b = out.personality();
  for (int i = 0; i < Genome::kPersonalityCount; ++i) CHECK(*a[i] == *b[i]);
  CHECK(g.fertility == out.fertility);
}

TEST_CASE("mutation clips to trait ranges") {
  Rng rng(5);
  Genome g;
  g.honesty = 0.99;
  g.fertility = 0.99;
  MutationConfig cfg{1.0, 5.0};  // huge noise forces clipping
  for (int i = 0; i < 1000; ++i) {
    Genome out = mutate(g, cfg, rng);
    for (const double* t : out.personality()) {
      CHECK(*t >= -1.0);
      CHECK(*t <= 1.0);
    }
    CHECK(out.fertility >= 0.5);
    CHECK(out.fertility <= 1.0);
  }
}

TEST_CASE("mutation rate matches per-trait probability") {
  Rng rng(7);
  MutationConfig cfg{0.5, 0.3};
  int changed = 0, total = 0;
  for (int i = 0; i < 10000; ++i) {
    Genome g = random_genome(rng);
    Genome out = mutate(g, cfg, rng);
    auto a = g.personality(), b = out.personality();
    for (int t = 0; t < Genome::kPersonalityCount; ++t) {
      ++total;
      if (*a[t] != *b[t]) ++changed;
    }
  }
  double fraction = static_cast<double>(changed) / total;
  CHECK(fraction == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("mutate never leaves range over many random genomes") {
  Rng rng(9);
  MutationConfig cfg{0.5, 0.3};
  for (int i = 0; i < 100000; ++i) {
    Genome out = mutate(random_genome(rng), cfg, rng);
    for (const double* t : out.personality()) {
      CHECK(*t >= -1.0);
      CHECK(*t <= 1.0);
    }
    CHECK(out.fertility >= 0.5);
    CHECK(out.fertility <= 1.0);
  }
}

TEST_CASE("tick_vitals decrements and kills at the thresholds") {
  AgentState a;
  a.alive = true;

  a.energy = 2;
  a.time_left = 5;
  CHECK(!tick_vitals(a));
  CHECK(a.energy == 1);
  CHECK(a.time_left == 4);
  CHECK(a.alive);

  a = AgentState{};
  a.alive = true;
  a.energy = 1;
  a.time_left = 5;
  auto cause = tick_vitals(a);
  REQUIRE(cause.has_value());
  CHECK(*cause == DeathCause::kStarvation);
  CHECK(!a.alive);

  a = AgentState{};
  a.alive = true;
  a.energy = 50;
  a.time_left = 1;
  cause = tick_vitals(a);
  REQUIRE(cause.has_value());
  CHECK(*cause == DeathCause::kAge);
  CHECK(!a.alive);
}

TEST_CASE("truncate_memory keeps the most recent words") {
  std::string small = "one two three";
  CHECK(truncate_memory(small) == small);
  CHECK(truncate_memory("") == "");

  std::string big;
  for (int i = 0; i < 300; ++i) big += "w" + std::to_string(i) + " ";
  std::string out = truncate_memory(big);
  auto tokens = tokenize_ws(out);
  CHECK(tokens.size() == 250);
  CHECK(tokens.front() == "w50");
  CHECK(tokens.back() == "w299");
}

TEST_CASE("truncate_memory is idempotent") {
  std::string big;
  for (int i = 0; i < 400; ++i) big += "tok" + std::to_string(i) + " ";
  std::string once = truncate_memory(big);
  CHECK(truncate_memory(once) == once);
}

TEST_CASE("init_population places agents on distinct cells") {
  GridConfig g;
  g.width = 50;
  g.height = 50;
  g.perception_radius = 6;
  Rng rng(11);
  PopulationConfig cfg{50.0, 100, true};
  auto agents = init_population(20, cfg, g, rng);
  CHECK(agents.size() == 20);
  std::set<Position> cells;
  for (const AgentState& a : agents) {
    CHECK(a.energy == 50.0);
    CHECK(a.time_left == 100);
    CHECK(a.genome.has_value());
    cells.insert(a.pos);
  }
  CHECK(cells.size() == 20);

  auto lone = init_population(1, cfg, g, rng);
  CHECK(lone.size() == 1);
}

TEST_CASE("init_population rejects an overfull world") {
  GridConfig g;
  g.width = 3;
  g.height = 3;
  g.perception_radius = 1;
  Rng rng(13);
  PopulationConfig cfg;
  CHECK_THROWS_AS(init_population(10, cfg, g, rng), WorldFull);
}
