// Persistent named text objects living in a cell or an inventory.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "terra/grid.hpp"

namespace terra {

inline constexpr int kInfiniteLifespan = -1;

struct Artifact {
  std::string id;    // stable across the run, never reused
  std::string name;  // unique among live artifacts
  std::string payload;
  int lifespan = kInfiniteLifespan;  // remaining steps, or kInfiniteLifespan
  // Exactly one of: a grid cell, or the id of the holding agent.
  std::variant<Position, std::string> location;
  std::string creator;  // agent id
  int created_at = 0;
  std::vector<int> modified_at;

  bool held() const { return std::holds_alternative<std::string>(location); }
  const std::string& holder() const { return std::get<std::string>(location); }
  Position cell() const { return std::get<Position>(location); }
};

}  // namespace terra
