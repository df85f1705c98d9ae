#include "aisched/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aisched/error.hpp"

namespace aisched {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::FileError, "cannot write " + tmp);
    out << contents;
    if (!out) throw Error(ErrorCode::FileError, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::FileError, "cannot move " + tmp + " into place: " + ec.message());
}

std::vector<JobId> all_job_ids(const Instance& instance) {
  std::vector<JobId> ids(static_cast<std::size_t>(instance.job_count()));
  std::iota(ids.begin(), ids.end(), 1);
  return ids;
}

double mean_of(std::span<const Time> values) {
  if (values.empty()) return 0.0;
  return static_cast<double>(std::accumulate(values.begin(), values.end(), Time{0})) / static_cast<double>(values.size());
}

}  // namespace

double sequence_similarity(std::span<const JobId> a, std::span<const JobId> b) {
  const std::set<JobId> in_b(b.begin(), b.end());
  std::set<JobId> common;
  for (JobId j : a) {
    if (in_b.contains(j)) common.insert(j);
  }
  std::vector<JobId> ra;
  std::vector<JobId> rb;
  for (JobId j : a) {
    if (common.contains(j)) ra.push_back(j);
  }
  for (JobId j : b) {
    if (common.contains(j)) rb.push_back(j);
  }
  if (ra.size() <= 1) return 1.0;

  std::set<std::pair<JobId, JobId>> adjacent_b;
  for (std::size_t i = 0; i + 1 < rb.size(); ++i) adjacent_b.emplace(rb[i], rb[i + 1]);
  std::size_t shared = 0;
  for (std::size_t i = 0; i + 1 < ra.size(); ++i) shared += adjacent_b.contains({ra[i], ra[i + 1]}) ? 1 : 0;
  return static_cast<double>(shared) / static_cast<double>(ra.size() - 1);
}

RobustnessReport robustness(std::span<const Schedule> schedules) {
  if (schedules.size() < 2) throw Error(ErrorCode::NeedAtLeastTwo, "robustness compares at least two schedules");
  const std::size_t machines = schedules.front().machine_sequences().size();
  RobustnessReport report;
  for (const auto& schedule : schedules) {
    if (schedule.machine_sequences().size() != machines) throw Error(ErrorCode::MachineCountMismatch, "schedules differ in machine count");
    report.makespans.push_back(makespan(schedule));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    for (std::size_t j = i + 1; j < schedules.size(); ++j) {
      double sum = 0.0;
      for (std::size_t m = 0; m < machines; ++m) {
        sum += sequence_similarity(schedules[i].machine_sequences()[m], schedules[j].machine_sequences()[m]);
      }
      const double similarity = machines == 0 ? 1.0 : sum / static_cast<double>(machines);
      report.pairs.push_back({i, j, similarity});
      total += similarity;
    }
  }
  report.mean = total / static_cast<double>(report.pairs.size());
  return report;
}

Instance InstanceSource::load() const {
  if (path) return load_instance(*path);
  return generate_instance(seed, jobs, machines, duration_lo, duration_hi);
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw Error(ErrorCode::InvalidConfig, "at least one seed is required");
  schedule_ga.validate();
  antibody_ga.validate();
  if (library.libraries == 0 || library.components == 0 || library.component_length == 0) {
    throw Error(ErrorCode::InvalidShape, "library shape must be positive");
  }
  if (!(library.wildcard_rate >= 0.0 && library.wildcard_rate <= 1.0)) throw Error(ErrorCode::InvalidShape, "wildcard rate must lie in [0, 1]");
  if (!scenario_path && scenario_count < 1) throw Error(ErrorCode::InvalidConfig, "at least one scenario is required");
  if (sample_size && *sample_size == 0) throw Error(ErrorCode::EmptySample, "sample size must be positive");
}

std::vector<Scenario> ExperimentConfig::load_scenarios(const Instance& instance) const {
  if (scenario_path) {
    auto suite = parse_scenario_suite(read_file(*scenario_path));
    if (suite.empty()) throw Error(ErrorCode::InvalidScenario, "scenario file holds no scenarios");
    return suite;
  }
  return generate_scenarios(scenario_seed, instance, scenario_count, scenario_params);
}

std::size_t ExperimentConfig::resolve_sample_size(std::size_t universe_size) const {
  if (sample_size) return *sample_size;
  return std::max<std::size_t>(1, universe_size / 2);
}

GAConfig with_seed(GAConfig config, std::uint64_t seed, std::uint64_t stage) {
  config.seed = derive_seed(seed, {stage});
  return config;
}

void require_feasible(const Schedule& schedule) {
  if (auto violation = find_violation(schedule)) throw Error(ErrorCode::InfeasibleSchedule, *violation);
}

ExperimentResult execute_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.instance = config.instance.load();
  validate(result.instance);
  result.scenarios = config.load_scenarios(result.instance);
  result.antibody_generations = config.antibody_ga.generations;
  result.schedule_generations = config.schedule_ga.generations;

  std::vector<Instance> perturbed;
  for (const auto& scenario : result.scenarios) perturbed.push_back(apply_scenario(result.instance, scenario));

  for (std::uint64_t seed : config.seeds) {
    SeedRun run;
    run.seed = seed;

    const AntigenUniverse universe =
        build_antigen_universe(result.instance, result.scenarios, with_seed(config.schedule_ga, seed, 1), config.crossover);
    const GeneLibrary library =
        init_libraries(derive_seed(seed, {4}), config.library.libraries, config.library.components, config.library.component_length,
                       all_job_ids(result.instance), config.library.wildcard_rate);
    EvolutionResult evolved = evolve_antibodies(library, universe, with_seed(config.antibody_ga, seed, 2),
                                                config.resolve_sample_size(universe.antigens.size()), EvolutionOptions{config.crossover, std::nullopt});
    run.antibodies = std::move(evolved.population);
    run.system_fitness_trace = std::move(evolved.system_fitness_trace);

    for (std::size_t s = 0; s < perturbed.size(); ++s) {
      auto started = Clock::now();
      run.ais.schedules.push_back(build_schedule(run.antibodies, perturbed[s]));
      run.ais.wall_time_ms.push_back(config.record_timing ? elapsed_ms(started) : 0.0);

      started = Clock::now();
      const GAConfig baseline = with_seed(config.schedule_ga, derive_seed(seed, {3}), s);
      run.ga.schedules.push_back(search_schedule(perturbed[s], baseline, config.crossover).best);
      run.ga.wall_time_ms.push_back(config.record_timing ? elapsed_ms(started) : 0.0);
    }
    if (perturbed.size() >= 2) {
      run.ais.robustness = robustness(run.ais.schedules);
      run.ga.robustness = robustness(run.ga.schedules);
    } else {
      // a single scenario has nothing to compare against
      run.ais.robustness = {{}, 1.0, {makespan(run.ais.schedules.front())}};
      run.ga.robustness = {{}, 1.0, {makespan(run.ga.schedules.front())}};
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

std::string format_report_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  out << "seed,scenario_id,method,makespan,system_fitness_final,robustness_mean,generations,wall_time_ms\n";
  for (const auto& run : result.runs) {
    for (std::size_t s = 0; s < result.scenarios.size(); ++s) {
      out << run.seed << ',' << s << ",ais," << makespan(run.ais.schedules[s]) << ',' << run.system_fitness_trace.back() << ','
          << run.ais.robustness.mean << ',' << result.antibody_generations << ',' << run.ais.wall_time_ms[s] << '\n';
      out << run.seed << ',' << s << ",ga," << makespan(run.ga.schedules[s]) << ",," << run.ga.robustness.mean << ','
          << result.schedule_generations << ',' << run.ga.wall_time_ms[s] << '\n';
    }
  }
  return out.str();
}

std::string format_report_json(const ExperimentResult& result) {
  using nlohmann::ordered_json;
  const auto method_json = [](const MethodRun& method) {
    ordered_json makespans = ordered_json::array();
    for (const auto& schedule : method.schedules) makespans.push_back(makespan(schedule));
    ordered_json pairs = ordered_json::array();
    for (const auto& pair : method.robustness.pairs) pairs.push_back({pair.first, pair.second, pair.similarity});
    ordered_json sequences = ordered_json::array();
    for (const auto& schedule : method.schedules) sequences.push_back(schedule.machine_sequences());
    return ordered_json{{"makespans", makespans},
                        {"robustness_mean", method.robustness.mean},
                        {"pair_similarities", pairs},
                        {"machine_sequences", sequences}};
  };

  ordered_json runs = ordered_json::array();
  double ais_total = 0.0;
  double ga_total = 0.0;
  int ais_more_robust = 0;
  for (const auto& run : result.runs) {
    std::vector<std::string> antibodies;
    for (const auto& antibody : run.antibodies.antibodies) antibodies.push_back(format_symbols(antibody.symbols));
    runs.push_back({{"seed", run.seed},
                    {"ais", method_json(run.ais)},
                    {"ga", method_json(run.ga)},
                    {"system_fitness_trace", run.system_fitness_trace},
                    {"antibodies", antibodies},
                    {"antibody_fitness", run.antibodies.fitness}});
    ais_total += mean_of(run.ais.robustness.makespans);
    ga_total += mean_of(run.ga.robustness.makespans);
    ais_more_robust += run.ais.robustness.mean >= run.ga.robustness.mean ? 1 : 0;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(1, result.runs.size()));
  ordered_json root{{"instance", {{"jobs", result.instance.job_count()}, {"machines", result.instance.machine_count}}},
                    {"scenarios", result.scenarios.size()},
                    {"antibody_generations", result.antibody_generations},
                    {"schedule_generations", result.schedule_generations},
                    {"runs", runs},
                    {"summary",
                     {{"ais_mean_makespan", ais_total / n},
                      {"ga_mean_makespan", ga_total / n},
                      {"seeds_ais_at_least_as_robust", ais_more_robust}}}};
  return root.dump(2) + "\n";
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config) {
  const ExperimentResult result = execute_experiment(config);
  for (const auto& run : result.runs) {
    for (const auto& schedule : run.ais.schedules) require_feasible(schedule);
    for (const auto& schedule : run.ga.schedules) require_feasible(schedule);
  }
  const std::string csv = format_report_csv(result);
  const std::string json = format_report_json(result);

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(ErrorCode::FileError, "cannot create " + config.out_dir.string() + ": " + ec.message());
  const auto csv_path = config.out_dir / "report.csv";
  const auto json_path = config.out_dir / "report.json";
  write_file_atomically(csv_path, csv);
  write_file_atomically(json_path, json);
  return {csv_path, json_path};
}

RescheduleResult reschedule(const AntibodyPopulation& previous_population, const Schedule& previous_schedule, const Scenario& scenario,
                            const ExperimentConfig& config) {
  config.validate();
  if (previous_population.antibodies.empty()) throw Error(ErrorCode::EmptyAntibodySet, "previous population is empty");
  const std::uint64_t seed = config.seeds.front();
  const Instance& base = previous_schedule.instance();
  const Instance changed = apply_scenario(base, scenario);

  const std::vector<Scenario> only{scenario};
  const AntigenUniverse universe = build_antigen_universe(base, only, with_seed(config.schedule_ga, seed, 1), config.crossover);
  const GeneLibrary library = init_libraries(derive_seed(seed, {4}), config.library.libraries, config.library.components,
                                             config.library.component_length, all_job_ids(changed), config.library.wildcard_rate);
  const std::size_t sample = std::min(config.resolve_sample_size(universe.antigens.size()), universe.antigens.size());
  const GAConfig ga = with_seed(config.antibody_ga, seed, 2);

  EvolutionResult warm = evolve_antibodies(library, universe, ga, sample, EvolutionOptions{config.crossover, previous_population.antibodies});
  EvolutionResult cold = evolve_antibodies(library, universe, ga, sample, EvolutionOptions{config.crossover, std::nullopt});

  RescheduleResult result{previous_schedule, {}, {}, {}, std::nullopt, false};
  const double threshold = cold.system_fitness_trace.back();
  for (std::size_t g = 0; g < warm.system_fitness_trace.size(); ++g) {
    if (warm.system_fitness_trace[g] <= threshold) {
      result.warm_generations_to_threshold = g;
      break;
    }
  }

  // Reuse: previous orders, new jobs slotted in by single job addition.
  MachineSequences sequences = previous_schedule.machine_sequences();
  sequences.resize(static_cast<std::size_t>(changed.machine_count));
  for (MachineId m = 0; m < changed.machine_count; ++m) {
    sequences[static_cast<std::size_t>(m)] = single_job_addition(sequences, changed, m);
  }
  Schedule augmented = decode(changed, sequences);
  const Time previous_makespan = makespan(previous_schedule);
  const Time augmented_makespan = makespan(augmented);

  result.reused_previous = true;
  result.schedule = std::move(augmented);
  if (augmented_makespan > previous_makespan) {
    Schedule assembled = build_schedule(warm.population, changed);
    if (makespan(assembled) < augmented_makespan) {
      result.schedule = std::move(assembled);
      result.reused_previous = false;
    }
  }
  result.population = std::move(warm.population);
  result.warm_trace = std::move(warm.system_fitness_trace);
  result.cold_trace = std::move(cold.system_fitness_trace);
  return result;
}

}  // namespace aisched
