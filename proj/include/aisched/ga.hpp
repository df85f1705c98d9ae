#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisched/jssp.hpp"
#include "aisched/random.hpp"

namespace aisched {

/// Integer-token genome. Permutation genomes hold each token exactly once;
/// antibody genomes may also hold wildcards (kWildcard).
using Genome = std::vector<JobId>;

enum class CrossoverKind { OrderBased, TwoPoint, Overlap };

std::string_view to_string(CrossoverKind kind);  // "obx", "2pt", "overlap"
CrossoverKind parse_crossover(std::string_view name);

struct GAConfig {
  std::size_t population_size = 50;
  std::size_t generations = 100;
  double crossover_rate = 0.8;
  double mutation_rate = 0.2;
  std::size_t tournament_size = 3;
  std::size_t elitism_count = 1;
  std::uint64_t seed = 1;

  /// Throws InvalidConfig.
  void validate() const;
};

/// True when both genomes contain the same distinct tokens (no wildcards).
bool is_permutation_pair(std::span<const JobId> p1, std::span<const JobId> p2);

/// Order-based crossover: the tokens p1 holds at `positions` are rewritten in
/// the relative order they have in p2; everything else is copied from p1.
Genome order_based_crossover(const Genome& p1, const Genome& p2, std::span<const std::size_t> positions);
Genome order_based_crossover(const Genome& p1, const Genome& p2, Rng& rng);

/// Child takes p2 on [cut_a, cut_b) and p1 elsewhere. Tokens outside the
/// segment that duplicate one inside it are replaced, left to right, by the
/// missing tokens in p1 order (permutation parents) or by wildcards.
Genome two_point_crossover(const Genome& p1, const Genome& p2, std::size_t cut_a, std::size_t cut_b);
Genome two_point_crossover(const Genome& p1, const Genome& p2, Rng& rng);

/// Splices p1 and p2 at their longest common run of jobs (earliest in p1 on
/// ties): p1 up to the end of the run, then p2 after it. Repeated jobs in the
/// spliced tail become wildcards; permutation parents are instead repaired
/// by dropping repeats and appending missing tokens in p1 order. Without a
/// common job the child is p1.
Genome overlap_crossover(const Genome& p1, const Genome& p2);

/// Exchanges two distinct random positions.
void swap_mutation(Genome& genome, Rng& rng);

using FitnessFn = std::function<double(const Genome&)>;
using CrossoverFn = std::function<Genome(const Genome&, const Genome&, Rng&)>;
using MutationFn = std::function<void(Genome&, Rng&)>;

CrossoverFn crossover_operator(CrossoverKind kind);

struct GAOperators {
  CrossoverFn crossover = crossover_operator(CrossoverKind::OrderBased);
  MutationFn mutation = swap_mutation;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;

  bool operator==(const GenerationStats&) const = default;
};

GenerationStats summarize(std::size_t generation, std::span<const double> fitness);

/// CSV with header `generation,best,mean,worst`.
std::string format_trace_csv(std::span<const GenerationStats> trace);

/// Index of the fittest genome, lowest index on ties.
std::size_t best_index(std::span<const double> fitness);

/// One generational step: elites carried over, the rest bred by tournament
/// selection, crossover and mutation. Randomness is drawn in a fixed
/// per-child order (two tournaments, crossover coin, mutation coin).
std::vector<Genome> next_generation(const GAConfig& config, std::span<const Genome> population, std::span<const double> fitness,
                                    const GAOperators& operators, Rng& rng);

struct GAResult {
  Genome best;  // best ever seen
  double best_fitness = 0.0;
  std::vector<Genome> population;
  std::vector<double> fitness;
  std::vector<GenerationStats> trace;  // one row per generation, row 0 is the initial population
};

/// Maximizes `fitness`. `initial` must hold exactly population_size genomes.
GAResult run_ga(const GAConfig& config, std::vector<Genome> initial, const FitnessFn& fitness, const GAOperators& operators);

}  // namespace aisched
