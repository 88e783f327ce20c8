#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "ixdrl/trace.hpp"

namespace ixdrl::grid {

enum class ScenarioFamily { NearGoal, FarGoalHazards };

std::string_view to_string(ScenarioFamily family);
/// Accepts "NEAR_GOAL" / "FAR_GOAL_HAZARDS"; throws Error(InvalidArgument).
ScenarioFamily parse_family(std::string_view name);

struct Cell {
  int x = 0;
  int y = 0;  // y = 0 is the top row

  bool operator==(const Cell&) const = default;
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

struct GridScenario {
  int width = 10;
  int height = 10;
  Cell start;
  Cell goal;
  std::vector<Cell> hazards;
  ScenarioFamily family = ScenarioFamily::NearGoal;
  double step_reward = -0.01;
  double goal_reward = 1.0;
  double hazard_reward = -1.0;
  int max_steps = 60;
  std::uint64_t seed = 0;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool is_hazard(Cell c) const;
  /// Manhattan distance to the closest hazard, or width + height without hazards.
  int hazard_distance(Cell c) const;
  void validate() const;

  bool operator==(const GridScenario&) const = default;
};

/// Deterministic in (family, seed). NEAR_GOAL: goal within distance 3 of the
/// start, no hazards. FAR_GOAL_HAZARDS: goal at distance >= 2 (w + h) / 3 and
/// 10% of the cells are hazards, never sealing the goal off.
GridScenario make_scenario(ScenarioFamily family, std::uint64_t seed, int width = 10, int height = 10);

enum Move : int { North = 0, South = 1, East = 2, West = 3 };
enum Mode : int { Cautious = 0, Direct = 1 };

struct JointAction {
  int move = North;
  int mode = Direct;
};

struct AgentState {
  Cell pos;
  int t = 0;
  bool terminal = false;
};

struct StepOutcome {
  AgentState next;
  double reward = 0.0;
  bool done = false;
};

inline AgentState initial_state(const GridScenario& sc) { return AgentState{sc.start, 0, false}; }

/// Throws Error(SteppingTerminal) when `state` is already terminal.
StepOutcome env_step(const GridScenario& scenario, const AgentState& state, JointAction action);

/// Tabular value function and per-factor logits over a state key built from
/// the goal offset and the hazard layout of the four neighbouring cells.
struct PolicyModel {
  int width = 10;
  int height = 10;
  double discount = 0.95;
  std::vector<double> values;
  std::vector<std::array<double, 4>> move_logits;
  std::vector<std::array<double, 2>> mode_logits;

  static PolicyModel uniform(int width, int height, double discount);

  std::size_t state_count() const { return values.size(); }
  std::size_t state_index(const GridScenario& scenario, Cell pos) const;
  std::array<double, 4> move_dist(std::size_t state) const;
  std::array<double, 2> mode_dist(std::size_t state) const;

  bool operator==(const PolicyModel&) const = default;
};

/// Numerically stable softmax.
template <std::size_t N>
std::array<double, N> softmax(const std::array<double, N>& logits);

struct TrainerConfig {
  int width = 10;
  int height = 10;
  double discount = 0.95;
  double logit_limit = 30.0;  // keeps every probability strictly positive
};

/// One-step actor-critic: delta = r + gamma V(s') (1 - done) - V(s), then the
/// critic moves by alpha_v delta and each factor's logits follow the softmax
/// policy gradient scaled by alpha_p delta. Episode e uses
/// families[e % families.size()].
PolicyModel train_actor_critic(const std::vector<ScenarioFamily>& families, std::size_t episodes, double alpha_v,
                               double alpha_p, std::uint64_t seed, const TrainerConfig& config = {});

/// Names of the six recorded observation features.
std::vector<std::string> feature_names();

/// Dataset manifest for rollouts of `model`.
Manifest rollout_manifest(const PolicyModel& model, const GridScenario& reference);

/// Samples n_traces episodes, trace i running scenarios[i % size] with a seed
/// derived from (seed, i). outcome_tag carries the scenario family.
Dataset rollout(const PolicyModel& model, const std::vector<GridScenario>& scenarios, std::size_t n_traces,
                std::uint64_t seed, unsigned jobs = 1);

}  // namespace ixdrl::grid
