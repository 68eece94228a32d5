#include "terra/lineage.hpp"

#include <algorithm>
#include <stdexcept>

namespace terra {

const DagNode* AncestryDag::find(const std::string& id) const {
  for (const DagNode& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

void AncestryDag::validate() const {
  for (const DagEdge& e : edges) {
    const DagNode* child = find(e.child);
    const DagNode* parent = find(e.parent);
    if (!child || !parent)
      throw std::invalid_argument("edge references unknown node: " + e.child + "<-" +
                                  e.parent);
    if (parent->created_at > child->created_at)
      throw std::invalid_argument("edge violates creation order: " + e.child + "<-" +
                                  e.parent);
    if (e.confidence < 0.0 || e.confidence > 1.0)
      throw std::invalid_argument("confidence out of range on edge " + e.child);
  }
  lineage_depth(*this);  // throws CyclicAncestry on cycles
}

AncestryDag filter_edges(const AncestryDag& dag, double min_conf) {
  AncestryDag out;
  out.nodes = dag.nodes;
  for (const DagEdge& e : dag.edges)
    if (e.confidence >= min_conf) out.edges.push_back(e);
  return out;
}

DepthProfile lineage_depth(const AncestryDag& dag) {
  std::map<std::string, std::vector<std::string>> parents;  // child -> parents
  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, int> pending;  // unresolved parent count
  for (const DagNode& n : dag.nodes) pending[n.id] = 0;
  for (const DagEdge& e : dag.edges) {
    parents[e.child].push_back(e.parent);
    children[e.parent].push_back(e.child);
    pending[e.child] += 1;
  }

  DepthProfile profile;
  std::vector<std::string> ready;
  for (const auto& [id, count] : pending)
    if (count == 0) {
      ready.push_back(id);
      profile.depth[id] = 0;
    }
  size_t processed = 0;
  while (!ready.empty()) {
    std::string id = ready.back();
    ready.pop_back();
    ++processed;
    for (const std::string& child : children[id]) {
      profile.depth[child] = std::max(profile.depth.count(child) ? profile.depth[child] : 0,
                                      profile.depth[id] + 1);
      if (--pending[child] == 0) ready.push_back(child);
    }
  }
  if (processed != dag.nodes.size()) {
    // Identify one offending node for the message.
    for (const auto& [id, count] : pending)
      if (count > 0)
        throw CyclicAncestry("ancestry contains a cycle through node " + id);
    throw CyclicAncestry("ancestry contains a cycle");
  }

  for (const auto& [id, d] : profile.depth)
    profile.max_depth = std::max(profile.max_depth, d);
  size_t n = dag.nodes.size();
  if (n > 0) {
    profile.survival.resize(profile.max_depth + 1, 0.0);
    for (int x = 0; x <= profile.max_depth; ++x) {
      size_t count = 0;
      for (const auto& [id, d] : profile.depth)
        if (d >= x) ++count;
      profile.survival[x] = static_cast<double>(count) / n;
    }
    for (int x = 0; x <= profile.max_depth; ++x) {
      double nx = profile.max_depth > 0
                      ? static_cast<double>(x) / profile.max_depth
                      : 0.0;
      profile.normalized_survival.emplace_back(nx, profile.survival[x]);
    }
  }
  return profile;
}

DegreeStats degree_stats(const AncestryDag& dag) {
  DegreeStats stats;
  for (const DagNode& n : dag.nodes) {
    stats.in_degree[n.id] = 0;
    stats.out_degree[n.id] = 0;
  }
  for (const DagEdge& e : dag.edges) {
    stats.in_degree[e.child] += 1;
    stats.out_degree[e.parent] += 1;
  }
  return stats;
}

double dag_density(const AncestryDag& dag) {
  size_t n = dag.nodes.size();
  if (n < 2) return 0.0;
  return static_cast<double>(dag.edges.size()) /
         (static_cast<double>(n) * (n - 1));
}

HubReport hubs(const AncestryDag& dag, int min_degree, double min_conf) {
  AncestryDag filtered = filter_edges(dag, min_conf);
  DegreeStats stats = degree_stats(filtered);
  HubReport report;
  double in_sum = 0, out_sum = 0;
  for (const DagNode& n : dag.nodes) {
    int total = stats.in_degree[n.id] + stats.out_degree[n.id];
    if (total > min_degree) {
      report.hubs.insert(n.id);
      in_sum += stats.in_degree[n.id];
      out_sum += stats.out_degree[n.id];
    }
  }
  if (!report.hubs.empty()) {
    report.mean_in_degree = in_sum / report.hubs.size();
    report.mean_out_degree = out_sum / report.hubs.size();
  }
  return report;
}

NoveltyBins novelty_bins(const std::vector<double>& scores) {
  if (scores.empty()) return {};
  NoveltyBins bins;
  for (double s : scores) {
    if (s < 0.0 || s > 5.0)
      throw BadScore("novelty score out of [0,5]: " + std::to_string(s));
    if (s == 0.0)
      bins.zero += 1;
    else if (s <= 3.0)
      bins.low += 1;
    else if (s <= 4.2)
      bins.medium += 1;
    else
      bins.high += 1;
  }
  double n = static_cast<double>(scores.size());
  bins.zero /= n;
  bins.low /= n;
  bins.medium /= n;
  bins.high /= n;
  return bins;
}

}  // namespace terra
