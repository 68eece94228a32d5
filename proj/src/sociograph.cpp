#include "terra/sociograph.hpp"

#include <algorithm>
#include <sstream>

namespace terra {

double interaction_weight(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::kCopresence: return 0.1;
    case InteractionKind::kMessage: return 0.5;
    case InteractionKind::kEnergyGift: return 1.0;
    case InteractionKind::kEnergyTheft: return -1.0;
    case InteractionKind::kParentLink: return 10.0;
    case InteractionKind::kArtifactExchange: return 5.0;
  }
  return 0.0;
}

std::string to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::kCopresence: return "copresence";
    case InteractionKind::kMessage: return "message";
    case InteractionKind::kEnergyGift: return "energy_gift";
    case InteractionKind::kEnergyTheft: return "energy_theft";
    case InteractionKind::kParentLink: return "parent_link";
    case InteractionKind::kArtifactExchange: return "artifact_exchange";
  }
  return "?";
}

std::vector<InteractionEvent> extract_events(const RunLog& log) {
  std::vector<InteractionEvent> events;
  auto add = [&](InteractionKind kind, const std::string& src, const std::string& dst,
                 int t) {
    events.push_back({kind, src, dst, t, interaction_weight(kind)});
  };

  std::map<std::string, std::string> name_to_id;
  for (const AgentRecord& r : log.records) name_to_id[r.name] = r.id;

  // Mutual appearance in observations, once per unordered pair per step.
  std::map<int, std::map<std::string, std::set<std::string>>> sees;
  for (const AgentRecord& r : log.records)
    sees[r.t][r.id] = {r.visible_agents.begin(), r.visible_agents.end()};
  for (const auto& [t, view] : sees) {
    for (const auto& [a, seen] : view) {
      for (const std::string& b : seen) {
        if (a < b && view.count(b) && view.at(b).count(a))
          add(InteractionKind::kCopresence, a, b, t);
      }
    }
  }

  for (const AgentRecord& r : log.records) {
    // A received message is one sender->receiver communication event.
    for (const IncomingMessage& m : r.inbox) {
      auto sender = name_to_id.find(m.sender);
      if (sender != name_to_id.end())
        add(InteractionKind::kMessage, sender->second, r.id, r.t);
    }
    if (r.status != "applied") continue;
    if (r.action_kind == "give_energy" && r.transfer_target)
      add(InteractionKind::kEnergyGift, r.id, *r.transfer_target, r.t);
    else if (r.action_kind == "take_energy" && r.transfer_target)
      add(InteractionKind::kEnergyTheft, r.id, *r.transfer_target, r.t);
  }

  for (const BirthEvent& b : log.births)
    add(InteractionKind::kParentLink, b.parent, b.child, b.t);

  for (const ArtifactOpEvent& op : log.artifact_ops)
    if (op.op == "give" && op.counterparty)
      add(InteractionKind::kArtifactExchange, op.agent, *op.counterparty, op.t);

  return events;
}

const EdgeStats* SocialGraph::edge(const std::string& a, const std::string& b) const {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = edges.find(key);
  return it == edges.end() ? nullptr : &it->second;
}

int CommunityCover::membership_count(const std::string& node) const {
  int n = 0;
  for (const auto& c : communities) n += c.count(node) ? 1 : 0;
  return n;
}

SocialGraph build_graph(const std::vector<InteractionEvent>& events) {
  SocialGraph g;
  for (const InteractionEvent& e : events) {
    if (e.src == e.dst) continue;
    g.nodes.insert(e.src);
    g.nodes.insert(e.dst);
    auto key = e.src < e.dst ? std::make_pair(e.src, e.dst)
                             : std::make_pair(e.dst, e.src);
    EdgeStats& stats = g.edges[key];
    stats.signed_sum += e.weight;
    stats.abs_sum += std::abs(e.weight);
    stats.event_count += 1;
  }
  return g;
}

CommunityCover slpa(const SocialGraph& g, Rng& rng, int iterations,
                    double threshold) {
  CommunityCover cover;
  if (g.nodes.empty()) return cover;

  std::vector<std::string> nodes(g.nodes.begin(), g.nodes.end());
  std::map<std::string, std::vector<std::pair<std::string, double>>> neighbors;
  for (const auto& [key, stats] : g.edges) {
    if (stats.abs_sum <= 0.0) continue;
    neighbors[key.first].emplace_back(key.second, stats.abs_sum);
    neighbors[key.second].emplace_back(key.first, stats.abs_sum);
  }

  // Label memories start with the node's own id.
  std::map<std::string, std::map<std::string, int>> memory;
  for (const std::string& n : nodes) memory[n][n] = 1;
  int memory_len = 1;

  for (int round = 0; round < iterations; ++round) {
    std::vector<std::string> order = nodes;
    rng.shuffle(order);
    for (const std::string& listener : order) {
      auto nb = neighbors.find(listener);
      if (nb == neighbors.end() || nb->second.empty()) {
        memory[listener][listener] += 1;
        continue;
      }
      // Each neighbor speaks one label sampled by memory frequency; the
      // listener adopts the label with the largest summed edge weight,
      // breaking ties toward the lexicographically smallest label.
      std::map<std::string, double> votes;
      for (const auto& [speaker, weight] : nb->second) {
        const auto& mem = memory[speaker];
        int total = 0;
        for (const auto& [label, count] : mem) total += count;
        int pick = static_cast<int>(rng.index(static_cast<size_t>(total)));
        std::string spoken;
        for (const auto& [label, count] : mem) {
          pick -= count;
          if (pick < 0) {
            spoken = label;
            break;
          }
        }
        votes[spoken] += weight;
      }
      std::string best;
      double best_weight = -1.0;
      for (const auto& [label, weight] : votes) {
        if (weight > best_weight) {
          best = label;
          best_weight = weight;
        }
      }
      memory[listener][best] += 1;
    }
    ++memory_len;
  }

  // Labels meeting the frequency threshold define overlapping communities.
  std::map<std::string, std::set<std::string>> by_label;
  for (const std::string& n : nodes) {
    const auto& mem = memory[n];
    bool any = false;
    std::string top_label;
    int top_count = -1;
    for (const auto& [label, count] : mem) {
      if (static_cast<double>(count) / memory_len >= threshold) {
        by_label[label].insert(n);
        any = true;
      }
      if (count > top_count || (count == top_count && label < top_label)) {
        top_count = count;
        top_label = label;
      }
    }
    if (!any) by_label[top_label].insert(n);  // keep every node covered
  }

  std::vector<std::set<std::string>> communities;
  for (auto& [label, members] : by_label) communities.push_back(std::move(members));
  // Drop communities nested inside (or equal to) another.
  std::sort(communities.begin(), communities.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& c : communities) {
    bool nested = false;
    for (const auto& kept : cover.communities) {
      if (std::includes(kept.begin(), kept.end(), c.begin(), c.end())) {
        nested = true;
        break;
      }
    }
    if (!nested) cover.communities.push_back(c);
  }
  std::sort(cover.communities.begin(), cover.communities.end());
  return cover;
}

GraphMetrics graph_metrics(const SocialGraph& g, const CommunityCover& cover) {
  GraphMetrics m;
  size_t n = g.nodes.size();
  m.n_communities = static_cast<int>(cover.communities.size());
  if (n >= 2) {
    double possible = static_cast<double>(n) * (n - 1) / 2.0;
    m.density = static_cast<double>(g.edges.size()) / possible;
  }
  if (n > 0) {
    int multi = 0;
    for (const std::string& node : g.nodes)
      if (cover.membership_count(node) >= 2) ++multi;
    m.overlap_pct = 100.0 * multi / static_cast<double>(n);
  }
  double total = 0.0, intra = 0.0;
  for (const auto& [key, stats] : g.edges) {
    total += stats.abs_sum;
    for (const auto& community : cover.communities) {
      if (community.count(key.first) && community.count(key.second)) {
        intra += stats.abs_sum;
        break;
      }
    }
  }
  m.intra_share = total > 0.0 ? intra / total : 0.0;
  return m;
}

std::string edges_to_text(const SocialGraph& g) {
  std::ostringstream out;
  for (const auto& [key, stats] : g.edges)
    out << key.first << ' ' << key.second << ' ' << stats.signed_sum << ' '
        << stats.abs_sum << ' ' << stats.event_count << '\n';
  return out.str();
}

std::string cover_to_text(const CommunityCover& cover) {
  std::ostringstream out;
  for (const auto& community : cover.communities) {
    bool first = true;
    for (const std::string& node : community) {
      if (!first) out << ' ';
      out << node;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

CommunityCover cover_from_text(const std::string& text) {
  CommunityCover cover;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::set<std::string> community;
    std::string node;
    while (fields >> node) community.insert(node);
    if (!community.empty()) cover.communities.push_back(std::move(community));
  }
  return cover;
}

}  // namespace terra
