#include "kpflow/bpso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kpflow/errors.hpp"

namespace kpflow::bpso {

void Config::validate() const {
  if (num_particles < 1) throw InvalidBpsoConfig("num_particles must be >= 1");
  if (max_iterations < 1) throw InvalidBpsoConfig("max_iterations must be >= 1");
  if (!(v_min < v_max)) throw InvalidBpsoConfig("v_min must be < v_max");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidBpsoConfig("c1 and c2 must be > 0");
  if (inertia_start < inertia_end) {
    throw InvalidBpsoConfig("inertia_start must be >= inertia_end");
  }
  for (double w : {inertia_start, inertia_end}) {
    if (w < 0.4 || w > 0.9) throw InvalidBpsoConfig("inertia weights must lie in [0.4, 0.9]");
  }
  if (penalty_q && !(*penalty_q > 0.0)) throw InvalidBpsoConfig("penalty_q must be > 0");
}

double fitness(std::span<const std::uint8_t> position, const Instance& instance,
               double penalty_q) {
  if (position.size() != instance.size()) {
    throw DimensionMismatch("position has " + std::to_string(position.size()) +
                            " bits, instance has " + std::to_string(instance.size()) +
                            " items");
  }
  std::int64_t value = 0;
  std::int64_t weight = 0;
  for (std::size_t j = 0; j < position.size(); ++j) {
    if (position[j] != 0) {
      value += instance.items[j].value;
      weight += instance.items[j].weight_kb;
    }
  }
  const std::int64_t overweight = std::max<std::int64_t>(0, weight - instance.capacity_kb);
  return static_cast<double>(value) - penalty_q * static_cast<double>(overweight);
}

double resolve_penalty(const Instance& instance, const Config& config) {
  if (config.penalty_q) return *config.penalty_q;
  std::int64_t total = 0;
  for (const auto& item : instance.items) total += item.value;
  return 1.0 + static_cast<double>(total);
}

double inertia_at(const Config& config, std::size_t t) {
  if (config.max_iterations <= 1) return config.inertia_start;
  const double progress = static_cast<double>(std::min(t, config.max_iterations) - 1) /
                          static_cast<double>(config.max_iterations - 1);
  return config.inertia_start - (config.inertia_start - config.inertia_end) * progress;
}

double sigmoid(double v) noexcept { return 1.0 / (1.0 + std::exp(-v)); }

Swarm initialize_swarm(const Instance& instance, const Config& config) {
  config.validate();
  instance.validate();
  const std::size_t dims = instance.size();

  Swarm swarm;
  swarm.penalty_q = resolve_penalty(instance, config);
  swarm.particles.resize(config.num_particles);
  swarm.streams.reserve(config.num_particles);
  for (std::size_t i = 0; i < config.num_particles; ++i) {
    swarm.streams.push_back(make_rng({config.rng_seed, i}));
  }

  for (std::size_t i = 0; i < config.num_particles; ++i) {
    Particle& p = swarm.particles[i];
    Rng& rng = swarm.streams[i];
    p.position.resize(dims);
    p.velocity.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      p.position[d] = uniform01(rng) >= 0.5 ? 1 : 0;
    }
    for (std::size_t d = 0; d < dims; ++d) {
      p.velocity[d] = config.v_min + uniform01(rng) * (config.v_max - config.v_min);
    }
    p.best_position = p.position;
    p.best_fitness = fitness(p.position, instance, swarm.penalty_q);
  }

  swarm.global_best = swarm.particles.front().best_position;
  swarm.global_best_fitness = swarm.particles.front().best_fitness;
  for (const Particle& p : swarm.particles) {
    if (p.best_fitness > swarm.global_best_fitness) {
      swarm.global_best_fitness = p.best_fitness;
      swarm.global_best = p.best_position;
    }
  }
  return swarm;
}

namespace {

void move_particle(Particle& p, Rng& rng, const Selection& global_best,
                   const Instance& instance, const Config& config, double inertia,
                   double penalty_q) {
  for (std::size_t d = 0; d < p.position.size(); ++d) {
    const double x = p.position[d];
    const double r1 = uniform01(rng);
    const double r2 = uniform01(rng);
    double v = inertia * p.velocity[d] + r1 * config.c1 * (p.best_position[d] - x) +
               r2 * config.c2 * (global_best[d] - x);
    v = std::clamp(v, config.v_min, config.v_max);
    p.velocity[d] = v;
    p.position[d] = uniform01(rng) < sigmoid(v) ? 1 : 0;
  }
  const double f = fitness(p.position, instance, penalty_q);
  if (f > p.best_fitness) {
    p.best_fitness = f;
    p.best_position = p.position;
  }
}

}  // namespace

void step(Swarm& swarm, const Instance& instance, const Config& config, std::size_t t) {
  const double inertia = inertia_at(config, t);
  // Every particle sees the global best from the previous iteration.
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    move_particle(swarm.particles[i], swarm.streams[i], swarm.global_best, instance, config,
                  inertia, swarm.penalty_q);
  }
  for (const Particle& p : swarm.particles) {
    if (p.best_fitness > swarm.global_best_fitness) {
      swarm.global_best_fitness = p.best_fitness;
      swarm.global_best = p.best_position;
    }
  }
}

bool repair(Selection& selection, const Instance& instance) {
  std::int64_t weight = 0;
  for (std::size_t i = 0; i < selection.size(); ++i) {
    if (selection[i] != 0) weight += instance.items[i].weight_kb;
  }
  if (weight <= instance.capacity_kb) return false;

  auto order = knapsack::density_order(instance);
  for (auto it = order.rbegin(); it != order.rend() && weight > instance.capacity_kb; ++it) {
    if (selection[*it] != 0) {
      selection[*it] = 0;
      weight -= instance.items[*it].weight_kb;
    }
  }
  return true;
}

std::size_t fill(Selection& selection, const Instance& instance) {
  std::int64_t load = 0;
  for (std::size_t i = 0; i < selection.size(); ++i) {
    if (selection[i] != 0) load += instance.items[i].weight_kb;
  }
  std::size_t added = 0;
  for (std::size_t i : knapsack::density_order(instance)) {
    const std::int64_t w = instance.items[i].weight_kb;
    if (selection[i] == 0 && load + w <= instance.capacity_kb) {
      selection[i] = 1;
      load += w;
      ++added;
    }
  }
  return added;
}

Result solve(const Instance& instance, const Config& config) {
  Swarm swarm = initialize_swarm(instance, config);

  Result result;
  result.fitness_trace.reserve(config.max_iterations);
  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    step(swarm, instance, config, t);
    result.fitness_trace.push_back(swarm.global_best_fitness);
    result.iterations_run = t;
  }

  result.best_position = std::move(swarm.global_best);
  result.best_fitness = swarm.global_best_fitness;
  if (repair(result.best_position, instance)) {
    result.repaired = true;
    result.best_fitness = fitness(result.best_position, instance, swarm.penalty_q);
  }
  if (config.fill_slack) {
    result.filled = fill(result.best_position, instance);
    if (result.filled > 0) {
      result.best_fitness = fitness(result.best_position, instance, swarm.penalty_q);
    }
  }
  result.feasible = true;
  return result;
}

}  // namespace kpflow::bpso
