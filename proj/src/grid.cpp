#include "terra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace terra {

std::string to_string(FoodMode mode) {
  return mode == FoodMode::kUniform ? "uniform" : "clustered";
}

FoodMode food_mode_from_string(const std::string& s) {
  if (s == "uniform") return FoodMode::kUniform;
  if (s == "clustered") return FoodMode::kClustered;
  throw ConfigError("unknown food mode: " + s);
}

void GridConfig::validate() const {
  if (width < 1 || height < 1) throw ConfigError("grid dimensions must be positive");
  if (perception_radius < 0) throw ConfigError("perception_radius must be >= 0");
  if (width < 2 * perception_radius + 1 || height < 2 * perception_radius + 1)
    throw ConfigError("grid must be at least (2*perception_radius+1) wide and tall");
  if (food_mode == FoodMode::kClustered && cluster_count < 1)
    throw ConfigError("cluster_count must be >= 1");
  if (food_decay_prob < 0.0 || food_decay_prob > 1.0)
    throw ConfigError("food_decay_prob must lie in [0,1]");
  if (food_spawn_rate < 0.0) throw ConfigError("food_spawn_rate must be >= 0");
  if (food_value_min <= 0.0 || food_value_max < food_value_min)
    throw ConfigError("food values must satisfy 0 < min <= max");
  if (initial_food_items < 0) throw ConfigError("initial_food_items must be >= 0");
}

namespace {
int mod_floor(long long a, int m) {
  long long r = a % m;
  if (r < 0) r += m;
  return static_cast<int>(r);
}
}  // namespace

Position wrap(long long x, long long y, const GridConfig& g) {
  return {mod_floor(x, g.width), mod_floor(y, g.height)};
}

int torus_delta(int a, int b, int extent) {
  int d = mod_floor(static_cast<long long>(b) - a, extent);
  if (d > extent - d) d -= extent;
  return d;
}

int chebyshev(Position a, Position b, const GridConfig& g) {
  int dx = std::abs(torus_delta(a.x, b.x, g.width));
  int dy = std::abs(torus_delta(a.y, b.y, g.height));
  return std::max(dx, dy);
}

int manhattan(Position a, Position b, const GridConfig& g) {
  int dx = std::abs(torus_delta(a.x, b.x, g.width));
  int dy = std::abs(torus_delta(a.y, b.y, g.height));
  return dx + dy;
}

std::vector<Position> neighborhood(Position center, int r, const GridConfig& g) {
  std::vector<Position> cells;
  cells.reserve(static_cast<size_t>(2 * r + 1) * (2 * r + 1));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      cells.push_back(wrap(static_cast<long long>(center.x) + dx,
                           static_cast<long long>(center.y) + dy, g));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

}  // namespace terra
