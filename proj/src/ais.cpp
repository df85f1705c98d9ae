#include "aisched/ais.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "aisched/error.hpp"

namespace aisched {

namespace {

// Forces an antibody genome to exactly `length` symbols with distinct jobs:
// truncate on the right, pad with wildcards, wildcard repeated jobs.
void normalize_antibody(Genome& genome, std::size_t length) {
  genome.resize(length, kWildcard);
  std::unordered_set<JobId> seen;
  for (auto& symbol : genome) {
    if (symbol != kWildcard && !seen.insert(symbol).second) symbol = kWildcard;
  }
}

// Order-based crossover for antibodies whose job sets differ: only p1
// positions holding a job that p2 also holds take part in the reordering.
Genome order_based_shared(const Genome& p1, const Genome& p2, Rng& rng) {
  std::unordered_set<JobId> in_p2;
  for (JobId token : p2) {
    if (token != kWildcard) in_p2.insert(token);
  }
  std::vector<std::size_t> positions;
  std::unordered_set<JobId> chosen;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (p1[i] == kWildcard || !in_p2.contains(p1[i])) continue;
    if (rng.bernoulli(0.5)) {
      positions.push_back(i);
      chosen.insert(p1[i]);
    }
  }
  Genome child = p1;
  std::size_t next = 0;
  for (JobId token : p2) {
    if (token != kWildcard && chosen.contains(token)) child[positions[next++]] = token;
  }
  return child;
}

GAOperators antibody_operators(CrossoverKind kind, std::size_t length, std::vector<JobId> job_ids, double wildcard_rate) {
  GAOperators ops;
  ops.crossover = [kind, length](const Genome& a, const Genome& b, Rng& rng) {
    Genome child;
    switch (kind) {
      case CrossoverKind::OrderBased:
        child = is_permutation_pair(a, b) ? order_based_crossover(a, b, rng) : order_based_shared(a, b, rng);
        break;
      case CrossoverKind::TwoPoint:
        child = two_point_crossover(a, b, rng);
        break;
      case CrossoverKind::Overlap:
        child = overlap_crossover(a, b);
        break;
    }
    normalize_antibody(child, length);
    return child;
  };
  ops.mutation = [ids = std::move(job_ids), wildcard_rate](Genome& genome, Rng& rng) {
    if (genome.empty()) return;
    if (rng.bernoulli(0.5)) {
      swap_mutation(genome, rng);
      return;
    }
    // Point mutation; a job already present elsewhere trades places instead
    // of being duplicated.
    const std::size_t i = rng.index(genome.size());
    const JobId symbol = rng.bernoulli(wildcard_rate) ? kWildcard : ids[rng.index(ids.size())];
    if (symbol != kWildcard) {
      const auto it = std::find(genome.begin(), genome.end(), symbol);
      if (it != genome.end()) *it = genome[i];
    }
    genome[i] = symbol;
  };
  return ops;
}

MachineSequences split_segments(const Genome& genome, std::span<const std::size_t> offsets) {
  MachineSequences sequences(offsets.size() - 1);
  for (std::size_t m = 0; m + 1 < offsets.size(); ++m) {
    sequences[m].assign(genome.begin() + static_cast<std::ptrdiff_t>(offsets[m]), genome.begin() + static_cast<std::ptrdiff_t>(offsets[m + 1]));
  }
  return sequences;
}

std::vector<JobId> with_missing_appended(std::vector<JobId> sequence, const std::vector<JobId>& machine_jobs) {
  const std::set<JobId> present(sequence.begin(), sequence.end());
  for (JobId j : machine_jobs) {
    if (!present.contains(j)) sequence.push_back(j);
  }
  return sequence;
}

std::vector<JobId> parse_comma_symbols(std::string_view text) {
  std::vector<JobId> symbols;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view token = text.substr(pos, comma - pos);
    JobId id = kWildcard;
    if (token != "*") {
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
      if (ec != std::errc{} || ptr != token.data() + token.size() || id <= 0) {
        throw Error(ErrorCode::MalformedSymbols, "bad antibody token \"" + std::string(token) + "\"");
      }
    }
    symbols.push_back(id);
    pos = comma + 1;
  }
  return symbols;
}

}  // namespace

std::size_t AntigenUniverse::shortest_antigen() const {
  std::size_t shortest = SIZE_MAX;
  for (const auto& antigen : antigens) shortest = std::min(shortest, antigen.sequence.size());
  return antigens.empty() ? 0 : shortest;
}

std::vector<JobId> AntigenUniverse::job_ids() const {
  std::set<JobId> ids;
  for (const auto& antigen : antigens) ids.insert(antigen.sequence.begin(), antigen.sequence.end());
  return {ids.begin(), ids.end()};
}

std::string format_population(const AntibodyPopulation& population) {
  std::ostringstream out;
  for (std::size_t i = 0; i < population.antibodies.size(); ++i) {
    out << format_symbols(population.antibodies[i].symbols) << ' ' << (i < population.fitness.size() ? population.fitness[i] : 0) << '\n';
  }
  return out.str();
}

AntibodyPopulation parse_population(std::string_view text) {
  AntibodyPopulation population;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string symbols;
    if (!(fields >> symbols)) continue;
    std::int64_t fitness = 0;
    std::string extra;
    if (fields >> extra) {
      const auto [ptr, ec] = std::from_chars(extra.data(), extra.data() + extra.size(), fitness);
      if (ec != std::errc{} || ptr != extra.data() + extra.size() || (fields >> extra)) {
        throw Error(ErrorCode::MalformedSymbols, "bad population line \"" + line + "\"");
      }
    }
    population.antibodies.push_back(Antibody{parse_comma_symbols(symbols)});
    population.fitness.push_back(fitness);
  }
  return population;
}

ScheduleSearchResult search_schedule(const Instance& instance, const GAConfig& config, CrossoverKind crossover) {
  validate(instance);
  config.validate();

  std::vector<std::vector<JobId>> machine_jobs;
  std::vector<std::size_t> offsets{0};
  for (MachineId m = 0; m < instance.machine_count; ++m) {
    machine_jobs.push_back(instance.jobs_on(m));
    offsets.push_back(offsets.back() + machine_jobs.back().size());
  }

  Rng init_rng(derive_seed(config.seed, {0x1417}));
  std::vector<Genome> initial;
  for (std::size_t i = 0; i < config.population_size; ++i) {
    Genome genome;
    for (auto jobs : machine_jobs) {
      init_rng.shuffle(std::span<JobId>(jobs));
      genome.insert(genome.end(), jobs.begin(), jobs.end());
    }
    initial.push_back(std::move(genome));
  }

  const CrossoverFn segment_op = crossover_operator(crossover);
  GAOperators ops;
  ops.crossover = [&](const Genome& a, const Genome& b, Rng& rng) {
    Genome child;
    child.reserve(a.size());
    for (std::size_t m = 0; m + 1 < offsets.size(); ++m) {
      const auto lo = static_cast<std::ptrdiff_t>(offsets[m]);
      const auto hi = static_cast<std::ptrdiff_t>(offsets[m + 1]);
      const Genome sa(a.begin() + lo, a.begin() + hi);
      const Genome sb(b.begin() + lo, b.begin() + hi);
      const Genome sc = sa.size() < 2 ? sa : segment_op(sa, sb, rng);
      child.insert(child.end(), sc.begin(), sc.end());
    }
    return child;
  };
  ops.mutation = [&](Genome& genome, Rng& rng) {
    std::vector<std::size_t> eligible;
    for (std::size_t m = 0; m + 1 < offsets.size(); ++m) {
      if (offsets[m + 1] - offsets[m] >= 2) eligible.push_back(m);
    }
    if (eligible.empty()) return;
    const std::size_t m = eligible[rng.index(eligible.size())];
    Genome segment(genome.begin() + static_cast<std::ptrdiff_t>(offsets[m]), genome.begin() + static_cast<std::ptrdiff_t>(offsets[m + 1]));
    swap_mutation(segment, rng);
    std::copy(segment.begin(), segment.end(), genome.begin() + static_cast<std::ptrdiff_t>(offsets[m]));
  };

  const FitnessFn fitness = [&](const Genome& genome) {
    return -static_cast<double>(makespan(decode(instance, split_segments(genome, offsets))));
  };

  GAResult result = run_ga(config, std::move(initial), fitness, ops);
  return {decode(instance, split_segments(result.best, offsets)), std::move(result.trace)};
}

AntigenUniverse build_antigen_universe(const Instance& instance, std::span<const Scenario> scenarios, const GAConfig& config,
                                       CrossoverKind crossover) {
  if (scenarios.empty()) throw Error(ErrorCode::EmptyUniverse, "at least one scenario is required");
  AntigenUniverse universe;
  universe.source = instance;
  universe.scenarios.assign(scenarios.begin(), scenarios.end());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const Instance perturbed = apply_scenario(instance, scenarios[s]);
    GAConfig scenario_config = config;
    scenario_config.seed = derive_seed(config.seed, {s});
    auto found = search_schedule(perturbed, scenario_config, crossover);
    const auto& sequences = found.best.machine_sequences();
    for (std::size_t m = 0; m < sequences.size(); ++m) {
      if (sequences[m].empty()) continue;
      universe.antigens.push_back(Antigen{sequences[m], static_cast<MachineId>(m), static_cast<int>(s)});
    }
    universe.schedules.push_back(std::move(found.best));
  }
  return universe;
}

AntibodyPopulation assign_antibody_fitness(AntibodyPopulation population, std::span<const Antigen> sample, Rng& rng) {
  if (sample.empty()) throw Error(ErrorCode::EmptySample, "antigen sample is empty");
  if (population.antibodies.empty()) throw Error(ErrorCode::EmptyAntibodySet, "antibody population is empty");
  population.fitness.resize(population.antibodies.size(), 0);

  std::vector<int> scores(population.antibodies.size());
  std::vector<std::size_t> tied;
  for (const auto& antigen : sample) {
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = match_score(population.antibodies[i], antigen);
    const int best = *std::max_element(scores.begin(), scores.end());
    tied.clear();
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] == best) tied.push_back(i);
    }
    const std::size_t winner = tied.size() == 1 ? tied.front() : tied[rng.index(tied.size())];
    population.fitness[winner] += best;
  }
  return population;
}

double system_fitness(std::span<const Antigen> antigens, std::span<const Antibody> antibodies) {
  if (antigens.empty()) throw Error(ErrorCode::EmptyUniverse, "antigen universe is empty");
  if (antibodies.empty()) throw Error(ErrorCode::EmptyAntibodySet, "antibody set is empty");
  double total = 0.0;
  for (const auto& antigen : antigens) total += antigen_deficit(antigen, antibodies);
  return total / static_cast<double>(antigens.size());
}

EvolutionResult evolve_antibodies(const GeneLibrary& library, const AntigenUniverse& universe, const GAConfig& config,
                                  std::size_t sample_size, const EvolutionOptions& options) {
  config.validate();
  const auto& antigens = universe.antigens;
  if (antigens.empty()) throw Error(ErrorCode::EmptyUniverse, "antigen universe is empty");
  if (sample_size == 0) throw Error(ErrorCode::EmptySample, "sample size must be positive");
  if (sample_size > antigens.size()) throw Error(ErrorCode::InvalidConfig, "sample size exceeds the universe");
  const std::size_t length = library.antibody_length();
  if (length == 0 || library.components_per_library() == 0) throw Error(ErrorCode::InvalidShape, "empty gene library");
  if (length >= universe.shortest_antigen()) {
    throw Error(ErrorCode::AntibodyTooLong, "antibody length " + std::to_string(length) + " must be below the shortest antigen (" +
                                                std::to_string(universe.shortest_antigen()) + ")");
  }

  Rng rng(derive_seed(config.seed, {0xa1b}));
  std::vector<Genome> genomes;
  if (options.initial) {
    for (const auto& antibody : *options.initial) {
      if (genomes.size() == config.population_size) break;
      Genome genome = antibody.symbols;
      normalize_antibody(genome, length);
      genomes.push_back(std::move(genome));
    }
  }
  std::vector<std::size_t> indices(library.library_count());
  while (genomes.size() < config.population_size) {
    for (auto& index : indices) index = rng.index(library.components_per_library());
    genomes.push_back(express(library, indices).symbols);
  }

  const auto as_antibodies = [](const std::vector<Genome>& gs) {
    std::vector<Antibody> out;
    out.reserve(gs.size());
    for (const auto& g : gs) out.push_back(Antibody{g});
    return out;
  };

  const GAOperators ops = antibody_operators(options.crossover, length, universe.job_ids(), library.wildcard_rate);

  EvolutionResult result;
  std::vector<Antibody> antibodies = as_antibodies(genomes);
  result.system_fitness_trace.push_back(system_fitness(antigens, antibodies));

  std::vector<std::size_t> order(antigens.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Antigen> sample;
  std::vector<double> fitness;
  for (std::size_t g = 1; g <= config.generations; ++g) {
    sample.clear();
    for (std::size_t i = 0; i < sample_size; ++i) {
      std::swap(order[i], order[i + rng.index(order.size() - i)]);
      sample.push_back(antigens[order[i]]);
    }
    const AntibodyPopulation scored = assign_antibody_fitness(AntibodyPopulation{antibodies, {}}, sample, rng);
    fitness.assign(scored.fitness.begin(), scored.fitness.end());
    genomes = next_generation(config, genomes, fitness, ops, rng);
    antibodies = as_antibodies(genomes);
    result.system_fitness_trace.push_back(system_fitness(antigens, antibodies));
  }

  result.population = assign_antibody_fitness(AntibodyPopulation{std::move(antibodies), {}}, antigens, rng);
  return result;
}

std::optional<Antibody> somatic_recombination(const Antibody& a1, const Antibody& a2) {
  const auto& s1 = a1.symbols;
  const auto& s2 = a2.symbols;
  for (std::size_t k = std::min(s1.size(), s2.size()); k >= 1; --k) {
    const auto tail = s1.end() - static_cast<std::ptrdiff_t>(k);
    if (!std::equal(tail, s1.end(), s2.begin())) continue;
    if (std::all_of(tail, s1.end(), [](JobId s) { return s == kWildcard; })) continue;

    Antibody joined{s1};
    std::unordered_set<JobId> seen;
    for (JobId s : s1) {
      if (s != kWildcard) seen.insert(s);
    }
    for (std::size_t i = k; i < s2.size(); ++i) {
      const JobId s = s2[i];
      joined.symbols.push_back(s != kWildcard && !seen.insert(s).second ? kWildcard : s);
    }
    return joined;
  }
  return std::nullopt;
}

MachineSequences simple_recombination(const AntibodyPopulation& population, const Instance& instance) {
  std::vector<std::size_t> ranked(population.antibodies.size());
  std::iota(ranked.begin(), ranked.end(), 0);
  const auto fitness_of = [&](std::size_t i) { return i < population.fitness.size() ? population.fitness[i] : 0; };
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) { return fitness_of(a) > fitness_of(b); });

  MachineSequences partial(static_cast<std::size_t>(instance.machine_count));
  for (MachineId m = 0; m < instance.machine_count; ++m) {
    const auto on_machine = instance.jobs_on(m);
    const std::set<JobId> visits(on_machine.begin(), on_machine.end());
    std::set<JobId> placed;
    auto& sequence = partial[static_cast<std::size_t>(m)];
    for (std::size_t idx : ranked) {
      std::vector<JobId> jobs;
      for (JobId s : population.antibodies[idx].symbols) {
        if (s != kWildcard) jobs.push_back(s);
      }
      if (jobs.empty()) continue;
      const std::set<JobId> distinct(jobs.begin(), jobs.end());
      const bool fits = distinct.size() == jobs.size() &&
                        std::all_of(jobs.begin(), jobs.end(), [&](JobId j) { return visits.contains(j) && !placed.contains(j); });
      if (!fits) continue;
      sequence.insert(sequence.end(), jobs.begin(), jobs.end());
      placed.insert(jobs.begin(), jobs.end());
    }
  }
  return partial;
}

std::vector<JobId> single_job_addition(const MachineSequences& sequences, const Instance& instance, MachineId machine) {
  if (machine < 0 || machine >= instance.machine_count) throw Error(ErrorCode::UnknownMachine, "machine " + std::to_string(machine));
  if (sequences.size() != static_cast<std::size_t>(instance.machine_count)) {
    throw Error(ErrorCode::BadPermutation, "expected one partial sequence per machine");
  }

  std::vector<std::vector<JobId>> machine_jobs;
  MachineSequences trial(sequences.size());
  for (MachineId m = 0; m < instance.machine_count; ++m) {
    machine_jobs.push_back(instance.jobs_on(m));
    const auto& seq = sequences[static_cast<std::size_t>(m)];
    const std::set<JobId> distinct(seq.begin(), seq.end());
    const bool valid = distinct.size() == seq.size() && std::all_of(seq.begin(), seq.end(), [&](JobId j) {
                         return std::binary_search(machine_jobs.back().begin(), machine_jobs.back().end(), j);
                       });
    if (!valid) throw Error(ErrorCode::BadPermutation, "partial sequence for machine " + std::to_string(m) + " is invalid");
    trial[static_cast<std::size_t>(m)] = with_missing_appended(seq, machine_jobs.back());
  }

  const auto mi = static_cast<std::size_t>(machine);
  std::vector<JobId> current = sequences[mi];
  std::vector<JobId> missing;
  {
    const std::set<JobId> present(current.begin(), current.end());
    for (JobId j : machine_jobs[mi]) {
      if (!present.contains(j)) missing.push_back(j);
    }
  }

  for (std::size_t n = 0; n < missing.size(); ++n) {
    const JobId job = missing[n];
    std::size_t best_pos = 0;
    Time best_makespan = 0;
    for (std::size_t pos = 0; pos <= current.size(); ++pos) {
      std::vector<JobId> candidate = current;
      candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(pos), job);
      candidate.insert(candidate.end(), missing.begin() + static_cast<std::ptrdiff_t>(n + 1), missing.end());
      trial[mi] = std::move(candidate);
      const Time value = makespan(decode(instance, trial));
      if (pos == 0 || value < best_makespan) {
        best_makespan = value;
        best_pos = pos;
      }
    }
    current.insert(current.begin() + static_cast<std::ptrdiff_t>(best_pos), job);
  }
  return current;
}

Schedule build_schedule(const AntibodyPopulation& population, const Instance& instance) {
  validate(instance);
  MachineSequences sequences = simple_recombination(population, instance);
  for (MachineId m = 0; m < instance.machine_count; ++m) {
    sequences[static_cast<std::size_t>(m)] = single_job_addition(sequences, instance, m);
  }
  return decode(instance, sequences);
}

}  // namespace aisched
