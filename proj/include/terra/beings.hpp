// Agent state, personality genome, mutation, vitals, memory truncation.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "terra/grid.hpp"
#include "terra/rng.hpp"

namespace terra {

class WorldFull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seven personality axes in [-1,1] plus fertility in [0.5,1].
struct Genome {
  double honesty = 0;
  double neuroticism = 0;
  double extraversion = 0;
  double agreeableness = 0;
  double conscientiousness = 0;
  double openness = 0;
  double dominance = 0;
  double fertility = 0.75;

  static constexpr int kPersonalityCount = 7;
  static const std::array<const char*, kPersonalityCount> kTraitNames;

  std::array<double*, kPersonalityCount> personality();
  std::array<const double*, kPersonalityCount> personality() const;
};

struct MutationConfig {
  double per_trait_prob = 0.5;
  double sigma = 0.3;
};

struct AgentState {
  std::string id;    // stable tag, never reused
  std::string name;  // display name, unique at creation time
  Position pos;
  double energy = 0.0;
  int time_left = 0;
  std::optional<Genome> genome;
  std::vector<std::string> inventory;  // names of held artifacts
  std::string memory;
  std::optional<std::string> parent;  // parent agent id
  int born_at = 0;
  bool alive = true;
};

enum class DeathCause { kStarvation, kAge };
std::string to_string(DeathCause cause);

Genome random_genome(Rng& rng);

// Each trait independently mutates with per_trait_prob; personality clips to
// [-1,1], fertility to [0.5,1].
Genome mutate(const Genome& g, const MutationConfig& cfg, Rng& rng);

// Decrements both vitals; returns the death cause if the agent just died.
// Energy depletion takes precedence when both hit zero together.
std::optional<DeathCause> tick_vitals(AgentState& a);

std::vector<std::string> tokenize_ws(std::string_view text);

// Word-count limits: unchanged up to `hard` tokens, otherwise only the most
// recent `hard` tokens are kept. `soft` is advisory (surfaced in prompts).
std::string truncate_memory(std::string_view text, int soft = 150,
                            int hard = 250);

struct PopulationConfig {
  double initial_energy = 50.0;
  int lifespan = 100;
  bool with_genome = true;
};

// n agents at distinct random cells. Throws WorldFull when n exceeds cells.
std::vector<AgentState> init_population(int n, const PopulationConfig& cfg,
                                        const GridConfig& grid, Rng& rng);

}  // namespace terra
