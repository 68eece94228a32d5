// Artifact phylogeny analytics: confidence filtering, lineage depth,
// survival curves, degree statistics, hubs, novelty bins.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace terra {

class CyclicAncestry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadScore : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DagNode {
  std::string id;
  int created_at = 0;
  double novelty = 0.0;  // [0,5]
  int category = -1;
  std::string creator;
};

struct DagEdge {
  std::string child;
  std::string parent;
  double confidence = 0.0;  // [0,1]
};

struct AncestryDag {
  std::vector<DagNode> nodes;
  std::vector<DagEdge> edges;

  const DagNode* find(const std::string& id) const;
  // Throws on cycles or edges violating created_at ordering.
  void validate() const;
};

// Keeps edges with confidence >= min_conf; nodes untouched.
AncestryDag filter_edges(const AncestryDag& dag, double min_conf = 0.7);

struct DepthProfile {
  std::map<std::string, int> depth;  // per node, root = 0
  int max_depth = 0;
  // fraction of nodes with depth >= x, for x = 0..max_depth
  std::vector<double> survival;
  // same over x/max_depth in [0,1]
  std::vector<std::pair<double, double>> normalized_survival;
};

// Longest ancestry path per node (edges counted), by topological order.
DepthProfile lineage_depth(const AncestryDag& dag);

struct DegreeStats {
  std::map<std::string, int> in_degree;   // direct ancestors
  std::map<std::string, int> out_degree;  // direct descendants
};

DegreeStats degree_stats(const AncestryDag& dag);

// Directed-graph density |E| / (n*(n-1)); 0 when n < 2.
double dag_density(const AncestryDag& dag);

struct HubReport {
  std::set<std::string> hubs;  // nodes with in+out degree > min_degree
  std::optional<double> mean_in_degree;
  std::optional<double> mean_out_degree;
};

HubReport hubs(const AncestryDag& dag, int min_degree = 30, double min_conf = 0.7);

struct NoveltyBins {
  double zero = 0, low = 0, medium = 0, high = 0;  // fractions, sum to 1
};

// zero: s = 0; low: 0 < s <= 3; medium: 3 < s <= 4.2; high: s > 4.2.
NoveltyBins novelty_bins(const std::vector<double>& scores);

}  // namespace terra
