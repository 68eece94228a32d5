// Toroidal grid geometry: wrapping, distances, neighborhoods.
#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace terra {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FoodMode { kUniform, kClustered };

std::string to_string(FoodMode mode);
FoodMode food_mode_from_string(const std::string& s);

struct GridConfig {
  int width = 50;
  int height = 50;
  int perception_radius = 6;
  FoodMode food_mode = FoodMode::kClustered;
  int cluster_count = 3;
  double food_decay_prob = 0.0;
  double food_spawn_rate = 0.0;   // expected new items per step (Poisson mean)
  double food_value_min = 1.0;
  double food_value_max = 1.0;
  int initial_food_items = 0;     // placed once at world init

  void validate() const;
};

struct Position {
  int x = 0;
  int y = 0;
  auto operator<=>(const Position&) const = default;
};

// Componentwise nonnegative modulo; accepts any integer input.
Position wrap(long long x, long long y, const GridConfig& g);

// Shortest signed offset from a to b along one axis of a ring of size extent.
int torus_delta(int a, int b, int extent);

int chebyshev(Position a, Position b, const GridConfig& g);
int manhattan(Position a, Position b, const GridConfig& g);

// All cells within toroidal Chebyshev distance r of center, sorted, unique.
std::vector<Position> neighborhood(Position center, int r, const GridConfig& g);

}  // namespace terra
