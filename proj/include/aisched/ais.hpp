#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisched/ga.hpp"
#include "aisched/gene_library.hpp"
#include "aisched/jssp.hpp"
#include "aisched/matching.hpp"

namespace aisched {

struct AntigenUniverse {
  std::vector<Antigen> antigens;
  std::vector<Scenario> scenarios;
  Instance source;
  std::vector<Schedule> schedules;  // best schedule found per scenario

  std::size_t shortest_antigen() const;
  /// Distinct job ids occurring in any antigen, ascending.
  std::vector<JobId> job_ids() const;
};

struct AntibodyPopulation {
  std::vector<Antibody> antibodies;
  std::vector<std::int64_t> fitness;  // accumulated match scores, parallel to antibodies

  std::size_t size() const { return antibodies.size(); }
  bool operator==(const AntibodyPopulation&) const = default;
};

// One line per antibody: symbols in comma form, a space, the fitness.
std::string format_population(const AntibodyPopulation& population);
AntibodyPopulation parse_population(std::string_view text);

struct ScheduleSearchResult {
  Schedule best;
  std::vector<GenerationStats> trace;  // fitness is -makespan
};

/// GA over per-machine job orders (one segment per machine, operators
/// applied segment-wise), fitness = -makespan of the decoded schedule.
ScheduleSearchResult search_schedule(const Instance& instance, const GAConfig& config,
                                     CrossoverKind crossover = CrossoverKind::OrderBased);

/// One GA-optimized schedule per scenario; each of its machine orders becomes
/// an antigen tagged with the scenario index.
AntigenUniverse build_antigen_universe(const Instance& instance, std::span<const Scenario> scenarios, const GAConfig& config,
                                       CrossoverKind crossover = CrossoverKind::OrderBased);

/// For each sampled antigen, the single best-matching antibody (uniformly
/// random among ties) has its match score added to its fitness.
AntibodyPopulation assign_antibody_fitness(AntibodyPopulation population, std::span<const Antigen> sample, Rng& rng);

/// Mean antigen deficit over the universe; 0 when every antigen is matched
/// perfectly by its best antibody.
double system_fitness(std::span<const Antigen> antigens, std::span<const Antibody> antibodies);
inline double system_fitness(const AntigenUniverse& universe, std::span<const Antibody> antibodies) {
  return system_fitness(universe.antigens, antibodies);
}

struct EvolutionResult {
  AntibodyPopulation population;
  std::vector<double> system_fitness_trace;  // entry 0 is the initial population
};

struct EvolutionOptions {
  CrossoverKind crossover = CrossoverKind::Overlap;
  /// Warm start: used instead of a library-expressed initial population.
  std::optional<std::vector<Antibody>> initial;
};

/// Evolves antibodies of fixed length (library antibody length) against
/// fresh antigen samples each generation. Returns the final population, its
/// fitness scored against the whole universe, and the system-fitness trace.
EvolutionResult evolve_antibodies(const GeneLibrary& library, const AntigenUniverse& universe, const GAConfig& config,
                                  std::size_t sample_size, const EvolutionOptions& options = {});

/// Joins a1 and a2 where a suffix of a1 equals a prefix of a2 (longest such
/// overlap containing at least one job). Repeated jobs in the appended part
/// become wildcards. nullopt without an overlap.
std::optional<Antibody> somatic_recombination(const Antibody& a1, const Antibody& a2);

/// Per machine, walks antibodies by descending fitness and appends an
/// antibody's jobs when all of them visit the machine and none is placed yet.
MachineSequences simple_recombination(const AntibodyPopulation& population, const Instance& instance);

/// Completes `sequences[machine]`: each missing job, ascending by id, goes to
/// the insertion point with the smallest decoded makespan (leftmost on ties).
/// Incomplete machine orders are evaluated with their missing jobs appended.
std::vector<JobId> single_job_addition(const MachineSequences& sequences, const Instance& instance, MachineId machine);

/// simple_recombination, then single_job_addition per machine, then decode.
Schedule build_schedule(const AntibodyPopulation& population, const Instance& instance);

}  // namespace aisched
