#include "ixdrl/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <random>

#include "ixdrl/common.hpp"

namespace ixdrl::grid {

namespace {

constexpr Cell kDelta[4] = {{0, -1}, {0, 1}, {1, 0}, {-1, 0}};  // N S E W

// Stream tags keep scenario draws and action sampling independent.
constexpr std::uint64_t kScenarioStream = 0x5CE4A210;
constexpr std::uint64_t kActionStream = 0xAC710400;

Cell clip_move(const GridScenario& sc, Cell from, int move) {
  Cell to{from.x + kDelta[move].x, from.y + kDelta[move].y};
  return sc.in_bounds(to) ? to : from;
}

bool goal_reachable(const GridScenario& sc) {
  std::vector<char> seen(static_cast<std::size_t>(sc.width * sc.height), 0);
  std::deque<Cell> frontier{sc.start};
  seen[static_cast<std::size_t>(sc.start.y * sc.width + sc.start.x)] = 1;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    if (c == sc.goal) return true;
    for (const Cell d : kDelta) {
      const Cell n{c.x + d.x, c.y + d.y};
      if (!sc.in_bounds(n) || sc.is_hazard(n)) continue;
      auto& s = seen[static_cast<std::size_t>(n.y * sc.width + n.x)];
      if (!s) {
        s = 1;
        frontier.push_back(n);
      }
    }
  }
  return false;
}

template <std::size_t N>
int sample(const std::array<double, N>& dist, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += dist[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(N - 1);
}

template <std::size_t N>
void policy_gradient_step(std::array<double, N>& logits, const std::array<double, N>& dist, int chosen,
                          double step, double limit) {
  for (std::size_t a = 0; a < N; ++a) {
    const double grad = static_cast<int>(a) == chosen ? 1.0 - dist[a] : -dist[a];
    logits[a] = std::clamp(logits[a] + step * grad, -limit, limit);
  }
}

}  // namespace

std::string_view to_string(ScenarioFamily family) {
  return family == ScenarioFamily::NearGoal ? "NEAR_GOAL" : "FAR_GOAL_HAZARDS";
}

ScenarioFamily parse_family(std::string_view name) {
  if (name == "NEAR_GOAL") return ScenarioFamily::NearGoal;
  if (name == "FAR_GOAL_HAZARDS") return ScenarioFamily::FarGoalHazards;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario family '" + std::string(name) + "'");
}

bool GridScenario::is_hazard(Cell c) const { return std::find(hazards.begin(), hazards.end(), c) != hazards.end(); }

int GridScenario::hazard_distance(Cell c) const {
  int best = width + height;
  for (const Cell h : hazards) best = std::min(best, manhattan(c, h));
  return best;
}

void GridScenario::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "grid must be at least 1x1");
  if (!in_bounds(start) || !in_bounds(goal)) throw Error(ErrorCode::InvalidArgument, "start/goal out of bounds");
  if (start == goal) throw Error(ErrorCode::InvalidArgument, "start and goal coincide");
  for (const Cell h : hazards) {
    if (!in_bounds(h)) throw Error(ErrorCode::InvalidArgument, "hazard out of bounds");
  }
  if (max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");
}

GridScenario make_scenario(ScenarioFamily family, std::uint64_t seed, int width, int height) {
  if (width < 2 || height < 2) throw Error(ErrorCode::InvalidArgument, "grid must be at least 2x2");
  GridScenario sc;
  sc.width = width;
  sc.height = height;
  sc.family = family;
  sc.seed = seed;
  std::mt19937_64 rng(mix_seed(seed, kScenarioStream + static_cast<std::uint64_t>(family)));

  std::vector<Cell> cells;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) cells.push_back({x, y});
  }
  auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };

  if (family == ScenarioFamily::NearGoal) {
    sc.start = pick(cells);
    std::vector<Cell> goals;
    for (const Cell c : cells) {
      const int d = manhattan(c, sc.start);
      if (d >= 1 && d <= 3) goals.push_back(c);
    }
    sc.goal = pick(goals);
    sc.validate();
    return sc;
  }

  const int min_distance = (2 * (width + height) + 2) / 3;  // ceil(2 (w + h) / 3)
  std::vector<std::pair<Cell, Cell>> pairs;
  for (const Cell a : cells) {
    for (const Cell b : cells) {
      if (manhattan(a, b) >= min_distance) pairs.emplace_back(a, b);
    }
  }
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "grid too small for FAR_GOAL_HAZARDS");
  std::tie(sc.start, sc.goal) = pick(pairs);

  std::vector<Cell> free_cells;
  for (const Cell c : cells) {
    if (!(c == sc.start) && !(c == sc.goal)) free_cells.push_back(c);
  }
  const auto hazard_count = static_cast<std::size_t>(std::lround(0.1 * width * height));
  for (int attempt = 0;; ++attempt) {
    std::shuffle(free_cells.begin(), free_cells.end(), rng);
    sc.hazards.assign(free_cells.begin(), free_cells.begin() + static_cast<std::ptrdiff_t>(hazard_count));
    std::sort(sc.hazards.begin(), sc.hazards.end(),
              [](Cell a, Cell b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    if (goal_reachable(sc)) break;
    if (attempt > 1000) throw Error(ErrorCode::InvalidArgument, "could not place hazards with a reachable goal");
  }
  sc.validate();
  return sc;
}

StepOutcome env_step(const GridScenario& sc, const AgentState& state, JointAction action) {
  if (state.terminal) throw Error(ErrorCode::SteppingTerminal, "episode already finished");
  if (action.move < 0 || action.move > 3 || action.mode < 0 || action.mode > 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid joint action");
  }
  StepOutcome out;
  Cell target = clip_move(sc, state.pos, action.move);
  out.reward = sc.step_reward;
  if (sc.is_hazard(target)) {
    if (action.mode == Cautious) {
      target = state.pos;
    } else {
      out.reward = sc.hazard_reward;
      out.done = true;
    }
  } else if (target == sc.goal) {
    out.reward = sc.goal_reward;
    out.done = true;
  }
  out.next = AgentState{target, state.t + 1, false};
  if (out.next.t >= sc.max_steps) out.done = true;
  out.next.terminal = out.done;
  return out;
}

template <std::size_t N>
std::array<double, N> softmax(const std::array<double, N>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::array<double, N> p{};
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) sum += p[i] = std::exp(logits[i] - top);
  for (double& v : p) v /= sum;
  return p;
}

template std::array<double, 4> softmax(const std::array<double, 4>&);
template std::array<double, 2> softmax(const std::array<double, 2>&);

PolicyModel PolicyModel::uniform(int width, int height, double discount) {
  PolicyModel m;
  m.width = width;
  m.height = height;
  m.discount = discount;
  const auto states = static_cast<std::size_t>((2 * width - 1) * (2 * height - 1) * 16);
  m.values.assign(states, 0.0);
  m.move_logits.assign(states, {});
  m.mode_logits.assign(states, {});
  return m;
}

std::size_t PolicyModel::state_index(const GridScenario& sc, Cell pos) const {
  if (sc.width != width || sc.height != height) {
    throw Error(ErrorCode::DimensionMismatch, "scenario grid does not match the policy tables");
  }
  const int dx = sc.goal.x - pos.x + (width - 1);
  const int dy = sc.goal.y - pos.y + (height - 1);
  int mask = 0;
  for (int m = 0; m < 4; ++m) {
    const Cell n{pos.x + kDelta[m].x, pos.y + kDelta[m].y};
    if (sc.in_bounds(n) && sc.is_hazard(n)) mask |= 1 << m;
  }
  return static_cast<std::size_t>((dy * (2 * width - 1) + dx) * 16 + mask);
}

std::array<double, 4> PolicyModel::move_dist(std::size_t s) const { return softmax(move_logits[s]); }
std::array<double, 2> PolicyModel::mode_dist(std::size_t s) const { return softmax(mode_logits[s]); }

PolicyModel train_actor_critic(const std::vector<ScenarioFamily>& families, std::size_t episodes, double alpha_v,
                               double alpha_p, std::uint64_t seed, const TrainerConfig& cfg) {
  if (!(alpha_v >= 0.0) || !(alpha_p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rates must be >= 0");
  if (episodes > 0 && families.empty()) throw Error(ErrorCode::InvalidArgument, "no scenario families to train on");
  PolicyModel model = PolicyModel::uniform(cfg.width, cfg.height, cfg.discount);
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    const GridScenario sc = make_scenario(families[ep % families.size()], mix_seed(seed, ep), cfg.width, cfg.height);
    std::mt19937_64 rng(mix_seed(seed ^ kActionStream, ep));
    AgentState state = initial_state(sc);
    while (!state.terminal) {
      const std::size_t s = model.state_index(sc, state.pos);
      const auto move_p = model.move_dist(s);
      const auto mode_p = model.mode_dist(s);
      const JointAction a{sample(move_p, rng), sample(mode_p, rng)};
      const StepOutcome out = env_step(sc, state, a);
      const double next_value = out.done ? 0.0 : model.values[model.state_index(sc, out.next.pos)];
      const double delta = out.reward + model.discount * next_value - model.values[s];
      model.values[s] += alpha_v * delta;
      policy_gradient_step(model.move_logits[s], move_p, a.move, alpha_p * delta, cfg.logit_limit);
      policy_gradient_step(model.mode_logits[s], mode_p, a.mode, alpha_p * delta, cfg.logit_limit);
      state = out.next;
    }
  }
  return model;
}

std::vector<std::string> feature_names() {
  return {"agent_x", "agent_y", "goal_dx", "goal_dy", "hazard_distance", "steps_remaining"};
}

Manifest rollout_manifest(const PolicyModel& model, const GridScenario& reference) {
  Manifest m;
  m.factor_names = {"move", "mode"};
  m.actions_per_factor = {{"N", "S", "E", "W"}, {"CAUTIOUS", "DIRECT"}};
  m.feature_names = feature_names();
  m.discount = model.discount;
  m.reward_range_override = std::make_pair(std::min(reference.hazard_reward, reference.step_reward),
                                           std::max(reference.goal_reward, reference.step_reward));
  return m;
}

Dataset rollout(const PolicyModel& model, const std::vector<GridScenario>& scenarios, std::size_t n_traces,
                std::uint64_t seed, unsigned jobs) {
  if (scenarios.empty()) throw Error(ErrorCode::InvalidArgument, "rollout needs at least one scenario");
  Dataset ds;
  ds.manifest = rollout_manifest(model, scenarios.front());
  ds.traces.resize(n_traces);
  const int digits = n_traces > 99999 ? 8 : 5;
  parallel_for(n_traces, jobs, [&](std::size_t i) {
    const GridScenario& sc = scenarios[i % scenarios.size()];
    std::mt19937_64 rng(mix_seed(seed, i));
    Trace& tr = ds.traces[i];
    char id[32];
    std::snprintf(id, sizeof id, "trace_%0*zu", digits, i);
    tr.trace_id = id;
    tr.outcome_tag = std::string(to_string(sc.family));
    AgentState state = initial_state(sc);
    while (!state.terminal) {
      const std::size_t s = model.state_index(sc, state.pos);
      const auto move_p = model.move_dist(s);
      const auto mode_p = model.mode_dist(s);
      const JointAction a{sample(move_p, rng), sample(mode_p, rng)};
      const StepOutcome out = env_step(sc, state, a);
      Step step;
      step.trace_id = tr.trace_id;
      step.t = static_cast<std::size_t>(state.t);
      step.features = {static_cast<double>(state.pos.x),
                       static_cast<double>(state.pos.y),
                       static_cast<double>(sc.goal.x - state.pos.x),
                       static_cast<double>(sc.goal.y - state.pos.y),
                       static_cast<double>(sc.hazard_distance(state.pos)),
                       static_cast<double>(sc.max_steps - state.t) / static_cast<double>(sc.max_steps)};
      step.action = {a.move, a.mode};
      step.dists = {std::vector<double>(move_p.begin(), move_p.end()), std::vector<double>(mode_p.begin(), mode_p.end())};
      step.value = model.values[s];
      step.reward = out.reward;
      step.done = out.done;
      tr.steps.push_back(std::move(step));
      state = out.next;
    }
  });
  return ds;
}

}  // namespace ixdrl::grid
