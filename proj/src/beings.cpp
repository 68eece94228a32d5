#include "terra/beings.hpp"

#include <algorithm>
#include <set>

namespace terra {

const std::array<const char*, Genome::kPersonalityCount> Genome::kTraitNames = {
    "honesty",           "neuroticism", "extraversion", "agreeableness",
    "conscientiousness", "openness",    "dominance"};

std::array<double*, Genome::kPersonalityCount> Genome::personality() {
  return {&honesty,           &neuroticism, &extraversion, &agreeableness,
          &conscientiousness, &openness,    &dominance};
}

std::array<const double*, Genome::kPersonalityCount> Genome::personality() const {
  return {&honesty,           &neuroticism, &extraversion, &agreeableness,
          &conscientiousness, &openness,    &dominance};
}

std::string to_string(DeathCause cause) {
  return cause == DeathCause::kStarvation ? "starvation" : "age";
}

Genome random_genome(Rng& rng) {
  Genome g;
  for (double* trait : g.personality()) *trait = rng.uniform(-1.0, 1.0);
  g.fertility = rng.uniform(0.5, 1.0);
  return g;
}

Genome mutate(const Genome& g, const MutationConfig& cfg, Rng& rng) {
  Genome out = g;
  for (double* trait : out.personality()) {
    if (rng.bernoulli(cfg.per_trait_prob))
      *trait = std::clamp(*trait + rng.normal(0.0, cfg.sigma), -1.0, 1.0);
  }
  if (rng.bernoulli(cfg.per_trait_prob))
    out.fertility = std::clamp(out.fertility + rng.normal(0.0, cfg.sigma), 0.5, 1.0);
  return out;
}

std::optional<DeathCause> tick_vitals(AgentState& a) {
  a.energy -= 1.0;
  a.time_left -= 1;
  if (a.energy <= 0.0) {
    a.alive = false;
    return DeathCause::kStarvation;
  }
  if (a.time_left <= 0) {
    a.alive = false;
    return DeathCause::kAge;
  }
  return std::nullopt;
}

std::vector<std::string> tokenize_ws(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string truncate_memory(std::string_view text, int /*soft*/, int hard) {
  std::vector<std::string> tokens = tokenize_ws(text);
  if (static_cast<int>(tokens.size()) <= hard) return std::string(text);
  std::string out;
  for (size_t i = tokens.size() - static_cast<size_t>(hard); i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<AgentState> init_population(int n, const PopulationConfig& cfg,
                                        const GridConfig& grid, Rng& rng) {
  long long cells = static_cast<long long>(grid.width) * grid.height;
  if (n < 1) throw ConfigError("population size must be >= 1");
  if (n > cells) throw WorldFull("population exceeds free cells");
  std::set<Position> taken;
  std::vector<AgentState> agents;
  agents.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Position pos;
    do {
      pos = {static_cast<int>(rng.index(static_cast<size_t>(grid.width))),
             static_cast<int>(rng.index(static_cast<size_t>(grid.height)))};
    } while (taken.count(pos));
    taken.insert(pos);
    AgentState a;
    a.id = "agent-" + std::to_string(i);
    a.name = "being" + std::to_string(i);
    a.pos = pos;
    a.energy = cfg.initial_energy;
    a.time_left = cfg.lifespan;
    if (cfg.with_genome) a.genome = random_genome(rng);
    a.born_at = 0;
    agents.push_back(std::move(a));
  }
  return agents;
}

}  // namespace terra
