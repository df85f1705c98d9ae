// Command-line driver: instance generation, antigen universes, antibody
// evolution, schedule assembly, full experiments and rescheduling.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "aisched/ais.hpp"
#include "aisched/error.hpp"
#include "aisched/harness.hpp"

using namespace aisched;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::string instance;
  std::string scenarios;
  std::string population;
  std::string scenario;
  int scenario_count = 10;
  int jobs = 10;
  int machines = 5;
  Time duration_lo = 1;
  Time duration_hi = 99;
  std::size_t libraries = 3;
  std::size_t components = 4;
  std::size_t component_len = 2;
  double wildcard_rate = 0.1;
  std::size_t pop_size = 50;
  std::size_t generations = 100;
  std::size_t schedule_pop_size = 40;
  std::size_t schedule_generations = 60;
  std::size_t sample_size = 0;  // 0: half the universe
  std::string crossover = "obx";
  std::string out;
  std::string format = "csv";
  std::vector<std::uint64_t> seeds;
  bool timing = false;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::FileError, "cannot write " + o.out);
  out << text;
}

ExperimentConfig make_config(const Options& o) {
  ExperimentConfig config;
  if (!o.instance.empty()) config.instance.path = o.instance;
  config.instance.seed = o.seed;
  config.instance.jobs = o.jobs;
  config.instance.machines = o.machines;
  config.instance.duration_lo = o.duration_lo;
  config.instance.duration_hi = o.duration_hi;
  if (!o.scenarios.empty()) config.scenario_path = o.scenarios;
  config.scenario_count = o.scenario_count;
  config.scenario_seed = o.seed;
  config.schedule_ga.population_size = o.schedule_pop_size;
  config.schedule_ga.generations = o.schedule_generations;
  config.antibody_ga.population_size = o.pop_size;
  config.antibody_ga.generations = o.generations;
  config.crossover = parse_crossover(o.crossover);
  config.library = {o.libraries, o.components, o.component_len, o.wildcard_rate};
  if (o.sample_size > 0) config.sample_size = o.sample_size;
  config.seeds = o.seeds.empty() ? std::vector<std::uint64_t>{o.seed} : o.seeds;
  if (!o.out.empty()) config.out_dir = o.out;
  config.record_timing = o.timing;
  return config;
}

std::vector<JobId> job_ids_of(const Instance& instance) {
  std::vector<JobId> ids;
  for (const auto& job : instance.jobs) ids.push_back(job.id);
  return ids;
}

std::string schedule_text(const Schedule& schedule, const std::string& format) {
  const auto& sequences = schedule.machine_sequences();
  if (format == "json") {
    ordered_json starts = ordered_json::array();
    for (const auto& job : schedule.instance().jobs) {
      for (std::size_t k = 0; k < job.routing.size(); ++k) {
        starts.push_back({{"job", job.id}, {"position", k}, {"machine", job.routing[k].machine}, {"start", schedule.start(job.id, k)},
                          {"end", schedule.end(job.id, k)}});
      }
    }
    return ordered_json{{"makespan", makespan(schedule)}, {"machine_sequences", sequences}, {"operations", starts}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "job,position,machine,start,end\n";
  for (const auto& job : schedule.instance().jobs) {
    for (std::size_t k = 0; k < job.routing.size(); ++k) {
      out << job.id << ',' << k << ',' << job.routing[k].machine << ',' << schedule.start(job.id, k) << ',' << schedule.end(job.id, k) << '\n';
    }
  }
  out << "# makespan " << makespan(schedule) << '\n';
  for (std::size_t m = 0; m < sequences.size(); ++m) out << "# machine " << m << ' ' << format_symbols(sequences[m]) << '\n';
  return out.str();
}

std::string trace_text(std::span<const double> trace, const std::string& format) {
  if (format == "json") return ordered_json{{"system_fitness_trace", trace}}.dump(2) + "\n";
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << "generation,system_fitness\n";
  for (std::size_t g = 0; g < trace.size(); ++g) out << g << ',' << trace[g] << '\n';
  return out.str();
}

int cmd_gen(const Options& o) {
  emit(o, format_instance(generate_instance(o.seed, o.jobs, o.machines, o.duration_lo, o.duration_hi)));
  return 0;
}

AntigenUniverse universe_for(const ExperimentConfig& config, std::uint64_t seed) {
  const Instance instance = config.instance.load();
  const auto scenarios = config.load_scenarios(instance);
  return build_antigen_universe(instance, scenarios, with_seed(config.schedule_ga, seed, 1), config.crossover);
}

int cmd_universe(const Options& o) {
  const auto config = make_config(o);
  config.validate();
  const auto universe = universe_for(config, config.seeds.front());
  std::ostringstream out;
  if (o.format == "json") {
    ordered_json antigens = ordered_json::array();
    for (const auto& a : universe.antigens) antigens.push_back({{"scenario", a.scenario_id}, {"machine", a.machine}, {"sequence", a.sequence}});
    out << ordered_json{{"antigens", antigens}}.dump(2) << '\n';
  } else {
    out << "scenario_id,machine,sequence\n";
    for (const auto& a : universe.antigens) out << a.scenario_id << ',' << a.machine << ",\"" << format_symbols(a.sequence) << "\"\n";
  }
  emit(o, out.str());
  return 0;
}

EvolutionResult evolve_for(const ExperimentConfig& config, const AntigenUniverse& universe, std::uint64_t seed) {
  const auto library = init_libraries(derive_seed(seed, {4}), config.library.libraries, config.library.components,
                                      config.library.component_length, job_ids_of(universe.source), config.library.wildcard_rate);
  return evolve_antibodies(library, universe, with_seed(config.antibody_ga, seed, 2),
                           config.resolve_sample_size(universe.antigens.size()), EvolutionOptions{config.crossover, std::nullopt});
}

int cmd_evolve(const Options& o) {
  const auto config = make_config(o);
  config.validate();
  const std::uint64_t seed = config.seeds.front();
  const auto universe = universe_for(config, seed);
  const auto evolved = evolve_for(config, universe, seed);
  if (o.format == "json") {
    ordered_json antibodies = ordered_json::array();
    for (std::size_t i = 0; i < evolved.population.size(); ++i) {
      antibodies.push_back({{"symbols", format_symbols(evolved.population.antibodies[i].symbols)}, {"fitness", evolved.population.fitness[i]}});
    }
    emit(o, ordered_json{{"antibodies", antibodies}, {"system_fitness_trace", evolved.system_fitness_trace}}.dump(2) + "\n");
  } else {
    // population dump is the primary output; the trace goes next to it
    emit(o, format_population(evolved.population));
    if (!o.out.empty()) {
      std::ofstream trace(o.out + ".trace.csv", std::ios::binary | std::ios::trunc);
      trace << trace_text(evolved.system_fitness_trace, "csv");
    }
  }
  return 0;
}

AntibodyPopulation population_for(const Options& o, const ExperimentConfig& config) {
  if (!o.population.empty()) return parse_population(read_text(o.population));
  const std::uint64_t seed = config.seeds.front();
  return evolve_for(config, universe_for(config, seed), seed).population;
}

int cmd_schedule(const Options& o) {
  const auto config = make_config(o);
  config.validate();
  Instance instance = config.instance.load();
  const AntibodyPopulation population = population_for(o, config);
  if (!o.scenario.empty()) instance = apply_scenario(instance, parse_scenario(read_text(o.scenario)));
  const Schedule schedule = build_schedule(population, instance);
  require_feasible(schedule);
  emit(o, schedule_text(schedule, o.format));
  return 0;
}

int cmd_experiment(const Options& o) {
  const auto paths = run_experiment(make_config(o));
  for (const auto& p : paths) std::cout << p.string() << '\n';
  return 0;
}

int cmd_reschedule(const Options& o) {
  if (o.scenario.empty()) throw Error(ErrorCode::InvalidScenario, "reschedule needs --scenario");
  const auto config = make_config(o);
  config.validate();
  const Instance instance = config.instance.load();
  const AntibodyPopulation population = population_for(o, config);
  const Schedule previous = build_schedule(population, instance);
  const auto result = reschedule(population, previous, parse_scenario(read_text(o.scenario)), config);
  require_feasible(result.schedule);

  if (o.format == "json") {
    ordered_json root{{"previous_makespan", makespan(previous)},
                      {"makespan", makespan(result.schedule)},
                      {"reused_previous", result.reused_previous},
                      {"warm_generations_to_threshold", result.warm_generations_to_threshold ? ordered_json(*result.warm_generations_to_threshold) : ordered_json()},
                      {"warm_trace", result.warm_trace},
                      {"cold_trace", result.cold_trace},
                      {"machine_sequences", result.schedule.machine_sequences()}};
    emit(o, root.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6);
    out << "# previous_makespan " << makespan(previous) << '\n';
    out << "# reused_previous " << (result.reused_previous ? "true" : "false") << '\n';
    out << "# warm_generations_to_threshold "
        << (result.warm_generations_to_threshold ? std::to_string(*result.warm_generations_to_threshold) : std::string("none")) << '\n';
    out << "generation,warm_system_fitness,cold_system_fitness\n";
    for (std::size_t g = 0; g < result.warm_trace.size(); ++g) {
      out << g << ',' << result.warm_trace[g] << ',' << result.cold_trace[g] << '\n';
    }
    out << schedule_text(result.schedule, "csv");
    emit(o, out.str());
  }
  return 0;
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--instance", o.instance, "Instance file (generated from --seed/--jobs/--machines when omitted)");
  cmd->add_option("--scenarios", o.scenarios, "Scenario suite JSON (generated when omitted)");
  cmd->add_option("--scenario-count", o.scenario_count, "Number of generated scenarios")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Jobs for a generated instance")->capture_default_str();
  cmd->add_option("--machines", o.machines, "Machines for a generated instance")->capture_default_str();
  cmd->add_option("--libraries", o.libraries, "Number of gene libraries")->capture_default_str();
  cmd->add_option("--components", o.components, "Components per library")->capture_default_str();
  cmd->add_option("--component-len", o.component_len, "Symbols per component")->capture_default_str();
  cmd->add_option("--wildcard-rate", o.wildcard_rate, "Wildcard probability per library symbol")->capture_default_str();
  cmd->add_option("--pop-size", o.pop_size, "Antibody population size")->capture_default_str();
  cmd->add_option("--generations", o.generations, "Antibody generations")->capture_default_str();
  cmd->add_option("--schedule-pop-size", o.schedule_pop_size, "Schedule GA population size")->capture_default_str();
  cmd->add_option("--schedule-generations", o.schedule_generations, "Schedule GA generations")->capture_default_str();
  cmd->add_option("--sample-size", o.sample_size, "Antigens sampled per generation (0: half the universe)")->capture_default_str();
  cmd->add_option("--crossover", o.crossover, "Crossover operator")->check(CLI::IsMember({"obx", "2pt", "overlap"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immune-system job-shop scheduling and rescheduling"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a random instance file");
  gen->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  gen->add_option("--jobs", o.jobs, "Number of jobs")->capture_default_str();
  gen->add_option("--machines", o.machines, "Number of machines")->capture_default_str();
  gen->add_option("--min-duration", o.duration_lo, "Shortest operation")->capture_default_str();
  gen->add_option("--max-duration", o.duration_hi, "Longest operation")->capture_default_str();
  gen->add_option("--out", o.out, "Output file (stdout when omitted)");

  auto* universe = app.add_subcommand("universe", "Build the antigen universe");
  auto* evolve = app.add_subcommand("evolve", "Evolve antibodies; writes the population dump");
  auto* schedule = app.add_subcommand("schedule", "Assemble a schedule from antibodies");
  auto* experiment = app.add_subcommand("experiment", "Run the AIS vs GA experiment suite");
  auto* resched = app.add_subcommand("reschedule", "Adapt a schedule to a new scenario");

  for (auto* cmd : {universe, evolve, schedule, experiment, resched}) {
    add_model_flags(cmd, o);
    cmd->add_option("--out", o.out, cmd == experiment ? "Report directory" : "Output file (stdout when omitted)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  }
  for (auto* cmd : {schedule, resched}) {
    cmd->add_option("--population", o.population, "Antibody population dump (evolved when omitted)");
    cmd->add_option("--scenario", o.scenario, "Scenario JSON to apply");
  }
  experiment->add_option("--seeds", o.seeds, "Experiment seeds (defaults to --seed)");
  experiment->add_flag("--timing", o.timing, "Record wall_time_ms (reports are then no longer byte-reproducible)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (universe->parsed()) return cmd_universe(o);
    if (evolve->parsed()) return cmd_evolve(o);
    if (schedule->parsed()) return cmd_schedule(o);
    if (experiment->parsed()) return cmd_experiment(o);
    if (resched->parsed()) return cmd_reschedule(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
