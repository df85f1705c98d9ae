#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aisched/ais.hpp"
#include "aisched/ga.hpp"
#include "aisched/jssp.hpp"

namespace aisched {

struct PairSimilarity {
  std::size_t first = 0;
  std::size_t second = 0;
  double similarity = 0.0;
};

struct RobustnessReport {
  std::vector<PairSimilarity> pairs;
  double mean = 0.0;
  std::vector<Time> makespans;
};

/// Fraction of ordered adjacent pairs of `a` (restricted to jobs present in
/// both) that are also adjacent, in the same order, in `b`. Orders over at
/// most one common job count as identical.
double sequence_similarity(std::span<const JobId> a, std::span<const JobId> b);

/// Pairwise schedule similarity averaged over machines, then over pairs.
RobustnessReport robustness(std::span<const Schedule> schedules);

struct InstanceSource {
  std::optional<std::string> path;  // instance file; the generator is used when empty
  std::uint64_t seed = 1;
  int jobs = 10;
  int machines = 5;
  Time duration_lo = 1;
  Time duration_hi = 99;

  Instance load() const;
};

struct LibraryShape {
  std::size_t libraries = 3;
  std::size_t components = 4;
  std::size_t component_length = 2;
  double wildcard_rate = 0.1;
};

struct ExperimentConfig {
  InstanceSource instance;
  std::optional<std::string> scenario_path;  // JSON suite; generated when empty
  int scenario_count = 10;
  std::uint64_t scenario_seed = 1;
  ScenarioGenerator scenario_params;

  GAConfig schedule_ga{.population_size = 40, .generations = 60, .crossover_rate = 0.8, .mutation_rate = 0.3,
                       .tournament_size = 3, .elitism_count = 2, .seed = 1};
  GAConfig antibody_ga{.population_size = 50, .generations = 100, .crossover_rate = 0.8, .mutation_rate = 0.3,
                       .tournament_size = 3, .elitism_count = 2, .seed = 1};
  CrossoverKind crossover = CrossoverKind::OrderBased;
  LibraryShape library;
  std::optional<std::size_t> sample_size;  // half the universe when empty
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path out_dir = "results";
  bool record_timing = false;  // wall_time_ms is written as 0 otherwise

  void validate() const;
  std::vector<Scenario> load_scenarios(const Instance& instance) const;
  std::size_t resolve_sample_size(std::size_t universe_size) const;
};

// Per-run seeds are derived from the experiment seed so that every stage
// draws from its own stream.
GAConfig with_seed(GAConfig config, std::uint64_t seed, std::uint64_t stage);

struct MethodRun {
  std::vector<Schedule> schedules;  // one per scenario
  std::vector<double> wall_time_ms;
  RobustnessReport robustness;
};

struct SeedRun {
  std::uint64_t seed = 0;
  MethodRun ais;
  MethodRun ga;
  AntibodyPopulation antibodies;
  std::vector<double> system_fitness_trace;
};

struct ExperimentResult {
  Instance instance;
  std::vector<Scenario> scenarios;
  std::vector<SeedRun> runs;
  std::size_t antibody_generations = 0;
  std::size_t schedule_generations = 0;
};

/// Runs every seed in memory: antigen universe, antibody evolution, one AIS
/// schedule per scenario, and an independent GA schedule per scenario.
ExperimentResult execute_experiment(const ExperimentConfig& config);

/// CSV columns: seed,scenario_id,method,makespan,system_fitness_final,
/// robustness_mean,generations,wall_time_ms.
std::string format_report_csv(const ExperimentResult& result);
std::string format_report_json(const ExperimentResult& result);

/// execute_experiment, revalidate every schedule, then write report.csv and
/// report.json into config.out_dir. Nothing is written if any step fails.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config);

struct RescheduleResult {
  Schedule schedule;
  AntibodyPopulation population;
  std::vector<double> warm_trace;
  std::vector<double> cold_trace;
  /// First generation at which the warm-started trace reaches the cold run's
  /// final system fitness.
  std::optional<std::size_t> warm_generations_to_threshold;
  bool reused_previous = false;
};

/// Adapts to `scenario`: the previous job orders are extended with new jobs
/// by single job addition and kept if their makespan does not exceed the
/// previous one; otherwise the better of that and a schedule assembled from
/// antibodies evolved warm from `previous_population` is returned. A cold
/// evolution is run alongside for the generations-to-threshold comparison.
RescheduleResult reschedule(const AntibodyPopulation& previous_population, const Schedule& previous_schedule, const Scenario& scenario,
                            const ExperimentConfig& config);

/// Throws InfeasibleSchedule with the first violation.
void require_feasible(const Schedule& schedule);

}  // namespace aisched
