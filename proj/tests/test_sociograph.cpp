#include <doctest.h>

#include <cmath>

#include "terra/sociograph.hpp"

using namespace terra;

namespace {

InteractionEvent ev(InteractionKind kind, const std::string& a, const std::string& b,
                    int t = 0) {
  return {kind, a, b, t, interaction_weight(kind)};
}

SocialGraph clique_pair_graph(int size_a, int size_b, double intra = 5.0,
                              double bridge = 0.1) {
  std::vector<InteractionEvent> events;
  auto add_clique = [&](const std::string& prefix, int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        events.push_back({InteractionKind::kArtifactExchange, names[i], names[j], 0,
                          intra});
    return names;
  };
  auto a = add_clique("a", size_a);
  auto b = add_clique("b", size_b);
  if (bridge > 0)
    events.push_back({InteractionKind::kCopresence, a[0], b[0], 0, bridge});
  return build_graph(events);
}

}  // namespace

TEST_CASE("the interaction weight table is exact") {
  CHECK(interaction_weight(InteractionKind::kCopresence) == 0.1);
  CHECK(interaction_weight(InteractionKind::kMessage) == 0.5);
  CHECK(interaction_weight(InteractionKind::kEnergyGift) == 1.0);
  CHECK(interaction_weight(InteractionKind::kEnergyTheft) == -1.0);
  CHECK(interaction_weight(InteractionKind::kParentLink) == 10.0);
  CHECK(interaction_weight(InteractionKind::kArtifactExchange) == 5.0);
}

TEST_CASE("build_graph accumulates signed and absolute sums") {
  SocialGraph g = build_graph({ev(InteractionKind::kEnergyGift, "A", "B"),
                               ev(InteractionKind::kMessage, "A", "B")});
  const EdgeStats* e = g.edge("A", "B");
  REQUIRE(e);
  CHECK(e->signed_sum == 1.5);
  CHECK(e->abs_sum == 1.5);
  CHECK(e->event_count == 2);

  g = build_graph({ev(InteractionKind::kEnergyGift, "A", "B"),
                   ev(InteractionKind::kEnergyTheft, "B", "A")});
  e = g.edge("A", "B");
  REQUIRE(e);
  CHECK(e->signed_sum == 0.0);
  CHECK(e->abs_sum == 2.0);

  CHECK(build_graph({}).edges.empty());
}

TEST_CASE("extract_events maps log entries to the interaction kinds") {
  // Hand-built two-agent log: mutual sight, one message, one gift, one theft,
  // one birth, one artifact hand-over.
  RunLog log;
  auto rec = [&](int t, const std::string& id, const std::string& name) {
    AgentRecord r;
    r.t = t;
    r.id = id;
    r.name = name;
    r.action_kind = "move";
    r.params = {{"direction", "stay"}};
    r.status = "applied";
    return r;
  };
  AgentRecord a = rec(1, "agent-0", "Ann");
  a.visible_agents = {"agent-1"};
  AgentRecord b = rec(1, "agent-1", "Bo");
  b.visible_agents = {"agent-0"};
  b.inbox = {{"Ann", "hi"}};
  AgentRecord c = rec(2, "agent-0", "Ann");
  c.action_kind = "give_energy";
  c.status = "applied";
  c.transfer_target = "agent-1";
  c.transfer_amount = 5;
  AgentRecord d = rec(3, "agent-1", "Bo");
  d.action_kind = "take_energy";
  d.status = "applied";
  d.transfer_target = "agent-0";
  d.transfer_amount = 2;
  log.records = {a, b, c, d};
  log.births.push_back({4, "agent-2", "Kid", "agent-0", {0, 0}, 50.0});
  log.artifact_ops.push_back({5, "give", "art-0", "note", "agent-0",
                              std::string("agent-1"), "hash"});

  auto events = extract_events(log);
  std::map<std::string, int> counts;
  std::map<std::string, double> weights;
  for (const InteractionEvent& e : events) {
    counts[to_string(e.kind)] += 1;
    weights[to_string(e.kind)] = e.weight;
  }
  CHECK(counts["copresence"] == 1);
  CHECK(counts["message"] == 1);
  CHECK(counts["energy_gift"] == 1);
  CHECK(counts["energy_theft"] == 1);
  CHECK(counts["parent_link"] == 1);
  CHECK(counts["artifact_exchange"] == 1);
  CHECK(weights["copresence"] == 0.1);
  CHECK(weights["message"] == 0.5);
  CHECK(weights["energy_gift"] == 1.0);
  CHECK(weights["energy_theft"] == -1.0);
  CHECK(weights["parent_link"] == 10.0);
  CHECK(weights["artifact_exchange"] == 5.0);
}

TEST_CASE("copresence needs mutual sight and counts once per pair-step") {
  RunLog log;
  AgentRecord a;
  a.t = 1;
  a.id = "agent-0";
  a.name = "Ann";
  a.action_kind = "move";
  a.status = "applied";
  a.visible_agents = {"agent-1"};
  AgentRecord b = a;
  b.id = "agent-1";
  b.name = "Bo";
  b.visible_agents = {};  // Bo does not see Ann back
  log.records = {a, b};
  CHECK(extract_events(log).empty());
}

TEST_CASE("one broadcast heard by three agents yields three message events") {
  RunLog log;
  for (int i = 0; i < 4; ++i) {
    AgentRecord r;
    r.t = 1;
    r.id = "agent-" + std::to_string(i);
    r.name = "n" + std::to_string(i);
    r.action_kind = "move";
    r.status = "applied";
    if (i > 0) r.inbox = {{"n0", "announcement"}};
    log.records.push_back(r);
  }
  auto events = extract_events(log);
  int messages = 0;
  for (const auto& e : events)
    if (e.kind == InteractionKind::kMessage) {
      ++messages;
      CHECK(e.src == "agent-0");
      CHECK(e.weight == 0.5);
    }
  CHECK(messages == 3);
}

TEST_CASE("slpa separates two 4-cliques over a weak bridge") {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    SocialGraph g = clique_pair_graph(4, 4);
    Rng rng(seed);
    CommunityCover cover = slpa(g, rng);
    REQUIRE(cover.communities.size() == 2);
    std::set<std::string> a{"a0", "a1", "a2", "a3"}, b{"b0", "b1", "b2", "b3"};
    bool match = (cover.communities[0] == a && cover.communities[1] == b) ||
                 (cover.communities[0] == b && cover.communities[1] == a);
    CHECK(match);
  }
}

TEST_CASE("slpa recovers disjoint cliques exactly, sizes 3 to 6") {
  for (int size = 3; size <= 6; ++size) {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
      SocialGraph g = clique_pair_graph(size, size, 5.0, 0.0);
      Rng rng(seed);
      CommunityCover cover = slpa(g, rng);
      REQUIRE(cover.communities.size() == 2);
      CHECK(cover.communities[0].size() == static_cast<size_t>(size));
      CHECK(cover.communities[1].size() == static_cast<size_t>(size));
      for (const auto& community : cover.communities) {
        char prefix = community.begin()->front();
        for (const std::string& node : community) CHECK(node.front() == prefix);
      }
    }
  }
}

TEST_CASE("slpa fixates a triangle into one community") {
  std::vector<InteractionEvent> events = {ev(InteractionKind::kEnergyGift, "x", "y"),
                                          ev(InteractionKind::kEnergyGift, "y", "z"),
                                          ev(InteractionKind::kEnergyGift, "z", "x")};
  SocialGraph g = build_graph(events);
  Rng rng(5);
  CommunityCover cover = slpa(g, rng);
  REQUIRE(cover.communities.size() == 1);
  CHECK(cover.communities[0] == std::set<std::string>{"x", "y", "z"});
}

TEST_CASE("isolated nodes become singleton communities") {
  SocialGraph g;
  g.nodes = {"alone"};
  Rng rng(1);
  CommunityCover cover = slpa(g, rng);
  REQUIRE(cover.communities.size() == 1);
  CHECK(cover.communities[0] == std::set<std::string>{"alone"});

  CHECK(slpa(SocialGraph{}, rng).communities.empty());
}

TEST_CASE("slpa is deterministic given a seed") {
  SocialGraph g = clique_pair_graph(4, 5);
  Rng r1(9), r2(9);
  CHECK(slpa(g, r1).communities == slpa(g, r2).communities);
}

TEST_CASE("slpa is equivariant under node relabeling") {
  SocialGraph g = clique_pair_graph(3, 4);
  Rng r1(3);
  CommunityCover cover = slpa(g, r1);
  // Relabel by swapping the prefixes.
  auto rename = [](const std::string& s) {
    std::string out = s;
    out[0] = out[0] == 'a' ? 'b' : 'a';
    return out;
  };
  SocialGraph renamed;
  for (const std::string& n : g.nodes) renamed.nodes.insert(rename(n));
  for (const auto& [key, stats] : g.edges) {
    std::string u = rename(key.first), v = rename(key.second);
    if (v < u) std::swap(u, v);
    renamed.edges[{u, v}] = stats;
  }
  Rng r2(3);
  CommunityCover renamed_cover = slpa(renamed, r2);
  // Same number and same sizes of communities (labels differ).
  REQUIRE(renamed_cover.communities.size() == cover.communities.size());
  std::multiset<size_t> sizes_a, sizes_b;
  for (const auto& c : cover.communities) sizes_a.insert(c.size());
  for (const auto& c : renamed_cover.communities) sizes_b.insert(c.size());
  CHECK(sizes_a == sizes_b);
}

TEST_CASE("graph metrics against their definitions") {
  SUBCASE("complete graph K4 has density 1") {
    SocialGraph g = clique_pair_graph(4, 0, 1.0, 0.0);
    CommunityCover cover;
    cover.communities = {{"a0", "a1", "a2", "a3"}};
    GraphMetrics m = graph_metrics(g, cover);
    CHECK(m.density == 1.0);
    CHECK(m.intra_share == 1.0);
    CHECK(m.overlap_pct == 0.0);
  }
  SUBCASE("4 nodes, 3 edges gives 0.5") {
    std::vector<InteractionEvent> events = {ev(InteractionKind::kEnergyGift, "a", "b"),
                                            ev(InteractionKind::kEnergyGift, "b", "c"),
                                            ev(InteractionKind::kEnergyGift, "c", "d")};
    SocialGraph g = build_graph(events);
    GraphMetrics m = graph_metrics(g, CommunityCover{});
    CHECK(m.density == 0.5);
    CHECK(m.intra_share == 0.0);
  }
  SUBCASE("intra share follows the cover") {
    std::vector<InteractionEvent> events = {ev(InteractionKind::kEnergyGift, "A", "B"),
                                            ev(InteractionKind::kCopresence, "C", "D")};
    SocialGraph g = build_graph(events);
    CommunityCover cover;
    cover.communities = {{"A", "B"}};
    GraphMetrics m = graph_metrics(g, cover);
    CHECK(m.intra_share == doctest::Approx(1.0 / 1.1));
    cover.communities = {{"A", "B"}, {"C", "D"}};
    CHECK(graph_metrics(g, cover).intra_share == 1.0);
  }
  SUBCASE("overlap percentage") {
    SocialGraph g = clique_pair_graph(3, 3);
    CommunityCover cover;
    cover.communities = {{"a0", "a1", "a2"}, {"a0", "b0", "b1", "b2"}};
    GraphMetrics m = graph_metrics(g, cover);
    CHECK(m.overlap_pct == doctest::Approx(100.0 / 6));
  }
  SUBCASE("tiny graphs define density as zero") {
    SocialGraph g;
    g.nodes = {"only"};
    GraphMetrics m = graph_metrics(g, CommunityCover{});
    CHECK(m.density == 0.0);
  }
}

TEST_CASE("metric ranges hold on random graphs") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng.index(8));
    std::vector<InteractionEvent> events;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!rng.bernoulli(0.4)) continue;
        auto kind = static_cast<InteractionKind>(rng.index(6));
        events.push_back(ev(kind, "n" + std::to_string(i), "n" + std::to_string(j)));
      }
    SocialGraph g = build_graph(events);
    Rng srng(trial);
    CommunityCover cover = slpa(g, srng, 30);
    GraphMetrics m = graph_metrics(g, cover);
    CHECK(m.density >= 0.0);
    CHECK(m.density <= 1.0);
    CHECK(m.overlap_pct >= 0.0);
    CHECK(m.overlap_pct <= 100.0);
    CHECK(m.intra_share >= 0.0);
    CHECK(m.intra_share <= 1.0);
    for (const auto& [key, stats] : g.edges)
      CHECK(stats.abs_sum >= std::abs(stats.signed_sum));
  }
}

TEST_CASE("edge list and cover text round-trip") {
  SocialGraph g = clique_pair_graph(3, 3);
  std::string edges = edges_to_text(g);
  CHECK(edges.find("a0 a1 5 5 1") != std::string::npos);
  CommunityCover cover;
  cover.communities = {{"a0", "a1"}, {"b0"}};
  CommunityCover back = cover_from_text(cover_to_text(cover));
  CHECK(back.communities == cover.communities);
}
