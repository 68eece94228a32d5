#include <doctest.h>

#include <algorithm>
#include <functional>

#include "terra/lineage.hpp"
#include "terra/rng.hpp"

using namespace terra;

namespace {

AncestryDag chain(int n) {
  AncestryDag dag;
  for (int i = 0; i < n; ++i) dag.nodes.push_back({"n" + std::to_string(i), i, 0, -1, ""});
  for (int i = 1; i < n; ++i)
    dag.edges.push_back({"n" + std::to_string(i), "n" + std::to_string(i - 1), 1.0});
  return dag;
}

AncestryDag random_dag(Rng& rng, int max_nodes = 12) {
  AncestryDag dag;
  int n = 1 + static_cast<int>(rng.index(max_nodes));
  for (int i = 0; i < n; ++i) dag.nodes.push_back({"n" + std::to_string(i), i, 0, -1, ""});
  for (int child = 1; child < n; ++child)
    for (int parent = 0; parent < child; ++parent)
      if (rng.bernoulli(0.3))
        dag.edges.push_back({"n" + std::to_string(child), "n" + std::to_string(parent),
                             rng.next_double()});
  return dag;
}

// Exhaustive longest-path-from-roots oracle by path enumeration.
int brute_force_depth(const AncestryDag& dag, const std::string& node) {
  std::map<std::string, std::vector<std::string>> parents;
  for (const DagEdge& e : dag.edges) parents[e.child].push_back(e.parent);
  std::function<int(const std::string&)> longest = [&](const std::string& v) -> int {
    if (!parents.count(v) || parents[v].empty()) return 0;
    int best = 0;
    for (const std::string& p : parents[v]) best = std::max(best, 1 + longest(p));
    return best;
  };
  return longest(node);
}

}  // namespace

TEST_CASE("filter_edges uses an inclusive threshold") {
  AncestryDag dag = chain(3);
  dag.edges[0].confidence = 0.69;
  dag.edges[1].confidence = 0.7;
  AncestryDag filtered = filter_edges(dag);
  REQUIRE(filtered.edges.size() == 1);
  CHECK(filtered.edges[0].confidence == 0.7);
  CHECK(filtered.nodes.size() == 3);
  CHECK(filter_edges(dag, 0.0).edges.size() == 2);
}

TEST_CASE("filter_edges is monotone in the threshold") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    AncestryDag dag = random_dag(rng);
    size_t last = dag.edges.size() + 1;
    for (double c = 0.0; c <= 1.001; c += 0.1) {
      size_t count = filter_edges(dag, c).edges.size();
      CHECK(count <= last);
      last = count;
    }
  }
}

TEST_CASE("lineage depth on chains and diamonds") {
  DepthProfile p = lineage_depth(chain(3));
  CHECK(p.depth["n0"] == 0);
  CHECK(p.depth["n1"] == 1);
  CHECK(p.depth["n2"] == 2);
  CHECK(p.max_depth == 2);

  AncestryDag diamond;
  for (int i = 0; i < 4; ++i)
    diamond.nodes.push_back({"n" + std::to_string(i), i, 0, -1, ""});
  diamond.edges = {{"n1", "n0", 1.0}, {"n2", "n0", 1.0}, {"n3", "n1", 1.0},
                   {"n3", "n2", 1.0}};
  p = lineage_depth(diamond);
  CHECK(p.depth["n3"] == 2);
}

TEST_CASE("lineage depth equals the exhaustive path oracle") {
  Rng rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    AncestryDag dag = random_dag(rng);
    DepthProfile p = lineage_depth(dag);
    for (const DagNode& n : dag.nodes)
      CHECK(p.depth[n.id] == brute_force_depth(dag, n.id));
  }
}

TEST_CASE("cycles raise CyclicAncestry") {
  AncestryDag dag = chain(3);
  dag.edges.push_back({"n0", "n2", 1.0});
  CHECK_THROWS_AS(lineage_depth(dag), CyclicAncestry);
}

TEST_CASE("survival is a valid complementary CDF") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    AncestryDag dag = random_dag(rng);
    DepthProfile p = lineage_depth(dag);
    REQUIRE(!p.survival.empty());
    CHECK(p.survival.front() == 1.0);
    for (size_t i = 1; i < p.survival.size(); ++i) {
      CHECK(p.survival[i] <= p.survival[i - 1]);
      CHECK(p.survival[i] >= 0.0);
      CHECK(p.survival[i] <= 1.0);
    }
  }
}

TEST_CASE("degree statistics") {
  AncestryDag star;
  star.nodes.push_back({"hub", 0, 0, -1, ""});
  for (int i = 1; i <= 5; ++i) {
    star.nodes.push_back({"c" + std::to_string(i), i, 0, -1, ""});
    star.edges.push_back({"c" + std::to_string(i), "hub", 1.0});
  }
  star.nodes.push_back({"isolated", 9, 0, -1, ""});
  DegreeStats stats = degree_stats(star);
  CHECK(stats.out_degree["hub"] == 5);
  CHECK(stats.in_degree["hub"] == 0);
  CHECK(stats.in_degree["c1"] == 1);
  CHECK(stats.in_degree["isolated"] == 0);
  CHECK(stats.out_degree["isolated"] == 0);
}

TEST_CASE("dag density is monotone in the confidence threshold") {
  Rng rng(37);
  AncestryDag dag = random_dag(rng, 12);
  double last = 1e9;
  for (double c = 0.0; c <= 1.0; c += 0.1) {
    double d = dag_density(filter_edges(dag, c));
    CHECK(d <= last);
    last = d;
  }
}

TEST_CASE("hub selection is strict on degree") {
  AncestryDag dag;
  dag.nodes.push_back({"hub", 0, 0, -1, ""});
  for (int i = 1; i <= 31; ++i) {
    dag.nodes.push_back({"c" + std::to_string(i), i, 0, -1, ""});
    dag.edges.push_back({"c" + std::to_string(i), "hub", 0.9});
  }
  // hub out-degree 31 -> included (exceeds 30); a 30-degree node is not.
  HubReport r = hubs(dag);
  CHECK(r.hubs == std::set<std::string>{"hub"});
  REQUIRE(r.mean_out_degree.has_value());
  CHECK(*r.mean_out_degree == 31);

  AncestryDag smaller;
  smaller.nodes.push_back({"hub", 0, 0, -1, ""});
  for (int i = 1; i <= 30; ++i) {
    smaller.nodes.push_back({"c" + std::to_string(i), i, 0, -1, ""});
    smaller.edges.push_back({"c" + std::to_string(i), "hub", 0.9});
  }
  HubReport r2 = hubs(smaller);
  CHECK(r2.hubs.empty());
  CHECK(!r2.mean_in_degree.has_value());

  // Low-confidence links do not count toward hub degrees.
  for (DagEdge& e : dag.edges) e.confidence = 0.5;
  CHECK(hubs(dag).hubs.empty());
}

TEST_CASE("novelty bins use right-closed boundaries") {
  NoveltyBins bins = novelty_bins({0.0, 3.0, 4.2, 5.0});
  CHECK(bins.zero == 0.25);
  CHECK(bins.low == 0.25);     // 3.0 is inclusive low
  CHECK(bins.medium == 0.25);  // 4.2 is inclusive medium
  CHECK(bins.high == 0.25);

  bins = novelty_bins({0, 0, 5, 4});
  CHECK(bins.zero == 0.5);
  CHECK(bins.low == 0.0);
  CHECK(bins.medium == 0.25);
  CHECK(bins.high == 0.25);

  // mean of five samples {4,4,5,4,4} lands exactly on the 4.2 boundary
  double score = (4.0 + 4.0 + 5.0 + 4.0 + 4.0) / 5.0;
  bins = novelty_bins({score});
  CHECK(bins.medium == 1.0);

  CHECK_THROWS_AS(novelty_bins({6.0}), BadScore);
  CHECK_THROWS_AS(novelty_bins({-0.1}), BadScore);
}

TEST_CASE("bin fractions always sum to one") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> scores;
    int n = 1 + static_cast<int>(rng.index(50));
    for (int i = 0; i < n; ++i) scores.push_back(rng.uniform(0.0, 5.0));
    NoveltyBins b = novelty_bins(scores);
    CHECK(b.zero + b.low + b.medium + b.high == doctest::Approx(1.0));
  }
}

TEST_CASE("validate rejects temporal violations") {
  AncestryDag dag;
  dag.nodes.push_back({"early", 1, 0, -1, ""});
  dag.nodes.push_back({"late", 5, 0, -1, ""});
  dag.edges.push_back({"early", "late", 0.9});  // parent created after child
  CHECK_THROWS(dag.validate());
}
