#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kpflow/knapsack.hpp"
#include "kpflow/rng.hpp"

namespace kpflow::bpso {

using knapsack::Instance;
using knapsack::Selection;

/// Swarm parameters. Defaults follow the evaluated configuration: 300
/// particles, 30 iterations, acceleration constants of 2, inertia decaying
/// linearly from 0.9 to 0.4, velocities clamped to [-6, 6].
struct Config {
  std::size_t num_particles = 300;
  std::size_t max_iterations = 30;
  double c1 = 2.0;
  double c2 = 2.0;
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  double v_min = -6.0;
  double v_max = 6.0;
  /// Penalty factor Q; std::nullopt selects Q = 1 + sum of item values.
  std::optional<double> penalty_q;
  std::uint64_t rng_seed = 0;
  /// After the swarm finishes, add unselected items that still fit, densest
  /// first. Off gives the bare swarm result.
  bool fill_slack = true;

  /// Throws InvalidBpsoConfig.
  void validate() const;
};

struct Particle {
  Selection position;
  std::vector<double> velocity;
  Selection best_position;
  double best_fitness = 0.0;
};

/// Mutable optimizer state. Each particle owns an independent random stream
/// so updates can run in any order without changing the outcome.
struct Swarm {
  std::vector<Particle> particles;
  std::vector<Rng> streams;
  Selection global_best;
  double global_best_fitness = 0.0;
  double penalty_q = 0.0;
};

struct Result {
  Selection best_position;
  double best_fitness = 0.0;
  bool feasible = true;
  /// The final global best was overweight and had bits dropped.
  bool repaired = false;
  /// Items added by the slack fill.
  std::size_t filled = 0;
  std::size_t iterations_run = 0;
  /// Global-best fitness after each iteration; non-decreasing.
  std::vector<double> fitness_trace;
};

/// Penalised objective: total value minus Q times the overweight, if any.
/// Throws DimensionMismatch when the position length differs from n.
double fitness(std::span<const std::uint8_t> position, const Instance& instance,
               double penalty_q);

/// Q actually used for `config` on `instance`.
double resolve_penalty(const Instance& instance, const Config& config);

/// Inertia weight at iteration t (1-based), interpolated linearly.
double inertia_at(const Config& config, std::size_t t);

double sigmoid(double v) noexcept;

/// Random binary positions (bit set iff a uniform draw >= 0.5) and uniform
/// velocities in [v_min, v_max]; bests taken from the initial fitness.
Swarm initialize_swarm(const Instance& instance, const Config& config);

/// One synchronous update at iteration t: velocity update with inertia,
/// clamping, sigmoid re-binarisation, then personal and global best updates
/// in particle-index order. Does not validate `config`.
void step(Swarm& swarm, const Instance& instance, const Config& config, std::size_t t);

/// Drops selected items in increasing density order until the selection
/// fits. Returns true if anything was dropped.
bool repair(Selection& selection, const Instance& instance);

/// Adds unselected items in decreasing density order while they fit.
/// Returns the number added.
std::size_t fill(Selection& selection, const Instance& instance);

/// Full optimisation run; the returned position is always feasible.
Result solve(const Instance& instance, const Config& config);

}  // namespace kpflow::bpso
