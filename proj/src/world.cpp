#include "terra/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace terra {

std::string fmt_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::string fmt_number_py(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
  }
  return fmt_number(v);
}

std::string CellView::line() const {
  std::string out = "(" + std::to_string(rel_x) + ", " + std::to_string(rel_y) + "): ";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += " | ";
    out += entries[i];
  }
  return out;
}

std::string Observation::text() const {
  std::string out;
  for (const CellView& c : cells) {
    out += c.line();
    out += '\n';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::vector<FoodItem> World::init(Rng& rng) {
  grid.validate();
  cluster_centers.clear();
  if (grid.food_mode == FoodMode::kClustered) {
    for (int i = 0; i < grid.cluster_count; ++i)
      cluster_centers.push_back(
          {static_cast<int>(rng.index(static_cast<size_t>(grid.width))),
           static_cast<int>(rng.index(static_cast<size_t>(grid.height)))});
  }
  return spawn_food_items(*this, grid.initial_food_items, rng);
}

AgentState* World::find_agent(const std::string& id) {
  for (AgentState& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

const AgentState* World::find_agent(const std::string& id) const {
  return const_cast<World*>(this)->find_agent(id);
}

AgentState* World::find_agent_by_name(const std::string& name) {
  for (AgentState& a : agents)
    if (a.name == name) return &a;
  return nullptr;
}

const AgentState* World::find_agent_by_name(const std::string& name) const {
  return const_cast<World*>(this)->find_agent_by_name(name);
}

bool World::occupied(Position pos, const std::string& ignore_id) const {
  for (const AgentState& a : agents)
    if (a.alive && a.pos == pos && a.id != ignore_id) return true;
  return false;
}

std::optional<Position> World::free_adjacent_cell(Position around, Rng& rng) const {
  std::vector<Position> candidates;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      Position p = wrap(static_cast<long long>(around.x) + dx,
                        static_cast<long long>(around.y) + dy, grid);
      if (!occupied(p)) candidates.push_back(p);
    }
  if (candidates.empty()) return std::nullopt;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates[rng.index(candidates.size())];
}

std::vector<const AgentState*> World::agents_within(const std::string& id,
                                                    int radius) const {
  const AgentState* self = find_agent(id);
  std::vector<const AgentState*> out;
  if (!self) return out;
  for (const AgentState& a : agents)
    if (a.alive && a.id != id && chebyshev(self->pos, a.pos, grid) <= radius)
      out.push_back(&a);
  return out;
}

std::vector<const Artifact*> World::artifacts_at(Position pos) const {
  std::vector<const Artifact*> out;
  if (inert_artifacts) return out;
  for (const auto& [name, art] : artifacts)
    if (!art.held() && art.cell() == pos) out.push_back(&art);
  return out;
}

void World::add_agent(AgentState agent) { agents.push_back(std::move(agent)); }

std::string World::next_agent_id() {
  return "agent-" + std::to_string(agent_counter_++);
}

std::string World::next_artifact_id() {
  return "art-" + std::to_string(artifact_counter_++);
}

int World::living_count() const {
  int n = 0;
  for (const AgentState& a : agents) n += a.alive ? 1 : 0;
  return n;
}

namespace {

Position draw_food_cell(const World& world, Rng& rng) {
  const GridConfig& g = world.grid;
  if (g.food_mode == FoodMode::kUniform || world.cluster_centers.empty()) {
    return {static_cast<int>(rng.index(static_cast<size_t>(g.width))),
            static_cast<int>(rng.index(static_cast<size_t>(g.height)))};
  }
  Position center = world.cluster_centers[rng.index(world.cluster_centers.size())];
  double sigma = g.perception_radius / 2.0;
  long long dx = std::llround(rng.normal(0.0, sigma));
  long long dy = std::llround(rng.normal(0.0, sigma));
  return wrap(center.x + dx, center.y + dy, g);
}

std::optional<FoodItem> place_one(World& world, Rng& rng) {
  // One food item per cell; up to 8 resamples on collision, then skip.
  for (int attempt = 0; attempt < 9; ++attempt) {
    Position pos = draw_food_cell(world, rng);
    auto key = std::make_pair(pos.x, pos.y);
    if (world.food.count(key)) continue;
    double value = rng.uniform(world.grid.food_value_min, world.grid.food_value_max);
    world.food[key] = FoodItem{pos, value, world.t};
    return world.food[key];
  }
  return std::nullopt;
}

}  // namespace

std::vector<FoodItem> spawn_food(World& world, Rng& rng) {
  int n = rng.poisson(world.grid.food_spawn_rate);
  return spawn_food_items(world, n, rng);
}

std::vector<FoodItem> spawn_food_items(World& world, int count, Rng& rng) {
  std::vector<FoodItem> added;
  for (int i = 0; i < count; ++i)
    if (auto item = place_one(world, rng)) added.push_back(*item);
  return added;
}

std::vector<Position> decay_food(World& world, Rng& rng) {
  std::vector<Position> removed;
  double p = world.grid.food_decay_prob;
  if (p <= 0.0) return removed;
  for (auto it = world.food.begin(); it != world.food.end();) {
    if (rng.bernoulli(p)) {
      removed.push_back(it->second.pos);
      it = world.food.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

Observation observe(const std::string& agent_id, const World& world) {
  const AgentState* self = world.find_agent(agent_id);
  if (!self || !self->alive) throw NoSuchAgent("no living agent with id " + agent_id);
  const GridConfig& g = world.grid;
  int r = g.perception_radius;

  Observation obs;
  std::vector<std::string> visible;
  for (int dy = r; dy >= -r; --dy) {
    for (int dx = -r; dx <= r; ++dx) {
      Position p = wrap(static_cast<long long>(self->pos.x) + dx,
                        static_cast<long long>(self->pos.y) + dy, g);
      std::vector<std::string> entries;
      bool own_cell = (dx == 0 && dy == 0);
      auto food_it = world.food.find({p.x, p.y});
      if (food_it != world.food.end())
        entries.push_back(fmt_number(food_it->second.value));
      std::vector<std::string> being_names;
      for (const AgentState& a : world.agents) {
        if (!a.alive || a.pos != p) continue;
        if (a.id == agent_id) continue;
        being_names.push_back(a.name);
        visible.push_back(a.id);
      }
      std::sort(being_names.begin(), being_names.end());
      for (std::string& n : being_names) entries.push_back(std::move(n));
      std::vector<std::string> artifact_names;
      for (const Artifact* art : world.artifacts_at(p))
        artifact_names.push_back(art->name);
      std::sort(artifact_names.begin(), artifact_names.end());
      for (const std::string& n : artifact_names) entries.push_back("A(" + n + ")");
      if (entries.empty()) continue;
      if (own_cell) entries.insert(entries.begin(), "<yourself>");
      obs.cells.push_back(CellView{dx, dy, std::move(entries)});
    }
  }
  std::sort(visible.begin(), visible.end());
  visible.erase(std::unique(visible.begin(), visible.end()), visible.end());
  obs.visible_agents = std::move(visible);
  return obs;
}

}  // namespace terra
