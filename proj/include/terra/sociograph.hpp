// Interaction-event extraction, signed weighted social graph, SLPA
// overlapping communities, graph metrics.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "terra/logio.hpp"
#include "terra/rng.hpp"

namespace terra {

enum class InteractionKind {
  kCopresence,       // +0.1
  kMessage,          // +0.5
  kEnergyGift,       // +1
  kEnergyTheft,      // -1
  kParentLink,       // +10
  kArtifactExchange  // +5
};

double interaction_weight(InteractionKind kind);
std::string to_string(InteractionKind kind);

struct InteractionEvent {
  InteractionKind kind;
  std::string src, dst;  // agent ids
  int t = 0;
  double weight = 0.0;
};

struct EdgeStats {
  double signed_sum = 0.0;
  double abs_sum = 0.0;
  int event_count = 0;
};

struct SocialGraph {
  std::set<std::string> nodes;
  std::map<std::pair<std::string, std::string>, EdgeStats> edges;  // key sorted

  const EdgeStats* edge(const std::string& a, const std::string& b) const;
};

struct CommunityCover {
  std::vector<std::set<std::string>> communities;

  int membership_count(const std::string& node) const;
};

std::vector<InteractionEvent> extract_events(const RunLog& log);

SocialGraph build_graph(const std::vector<InteractionEvent>& events);

// Speaker-listener label propagation on abs weights. T listening rounds; a
// node keeps every label whose memory frequency reaches r; nested or
// duplicate communities are merged away.
CommunityCover slpa(const SocialGraph& g, Rng& rng, int iterations = 100,
                    double threshold = 0.1);

struct GraphMetrics {
  double density = 0.0;
  int n_communities = 0;
  double overlap_pct = 0.0;  // agents in >= 2 communities, percent
  double intra_share = 0.0;  // abs weight inside communities / total
};

GraphMetrics graph_metrics(const SocialGraph& g, const CommunityCover& cover);

// "src dst signed abs count" lines, nodes sorted.
std::string edges_to_text(const SocialGraph& g);
// One community per line, members space-separated.
std::string cover_to_text(const CommunityCover& cover);
CommunityCover cover_from_text(const std::string& text);

}  // namespace terra
