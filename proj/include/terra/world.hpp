// World state: grid, food field, agents, artifacts, observation rendering.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "terra/artifacts.hpp"
#include "terra/beings.hpp"
#include "terra/grid.hpp"
#include "terra/rng.hpp"

namespace terra {

class NoSuchAgent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FoodItem {
  Position pos;
  double value = 0.0;
  int born_at = 0;
  bool operator==(const FoodItem&) const = default;
};

struct CellView {
  int rel_x = 0;
  int rel_y = 0;
  std::vector<std::string> entries;  // rendered, non-empty
  std::string line() const;          // "(x, y): e1 | e2"
};

struct Observation {
  std::vector<CellView> cells;
  std::vector<std::string> visible_agents;  // ids, sorted
  std::string text() const;                 // one line per cell
};

// Integral values print without a decimal point; otherwise shortest
// round-trip decimal form.
std::string fmt_number(double v);
// Python-float style: integral values keep one decimal ("59.0").
std::string fmt_number_py(double v);

class World {
 public:
  GridConfig grid;
  int t = 0;
  bool inert_artifacts = false;

  std::vector<AgentState> agents;  // creation order, dead agents retained
  std::map<std::pair<int, int>, FoodItem> food;
  std::map<std::string, Artifact> artifacts;  // live artifacts by name
  std::vector<Position> cluster_centers;

  // Draws cluster centers and places the initial food; returns what was
  // placed so the log can record it.
  std::vector<FoodItem> init(Rng& rng);

  AgentState* find_agent(const std::string& id);
  const AgentState* find_agent(const std::string& id) const;
  AgentState* find_agent_by_name(const std::string& name);
  const AgentState* find_agent_by_name(const std::string& name) const;

  bool occupied(Position pos, const std::string& ignore_id = {}) const;
  std::optional<Position> free_adjacent_cell(Position around, Rng& rng) const;

  // Living agents other than `id` within Chebyshev `radius`.
  std::vector<const AgentState*> agents_within(const std::string& id,
                                               int radius) const;
  // Live artifacts located at `pos` (none when inert_artifacts).
  std::vector<const Artifact*> artifacts_at(Position pos) const;

  void add_agent(AgentState agent);
  std::string next_agent_id();
  std::string next_artifact_id();
  void seed_counters(int agent_count, int artifact_count) {
    agent_counter_ = agent_count;
    artifact_counter_ = artifact_count;
  }

  int agents_ever() const { return static_cast<int>(agents.size()); }
  int living_count() const;

 private:
  int agent_counter_ = 0;
  int artifact_counter_ = 0;
};

// Both return what changed so the log can record it.
std::vector<FoodItem> spawn_food(World& world, Rng& rng);
std::vector<FoodItem> spawn_food_items(World& world, int count, Rng& rng);
std::vector<Position> decay_food(World& world, Rng& rng);

// Non-empty cells within the perception radius, egocentric coordinates,
// scanned north to south then west to east. The observer's own cell is
// listed only when something else shares it.
Observation observe(const std::string& agent_id, const World& world);

}  // namespace terra
