#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "aisched/ais.hpp"
#include "aisched/error.hpp"
#include "oracles.hpp"

using namespace aisched;

namespace {

Antibody ab(std::string_view text) { return parse_antibody(text); }

GAConfig small_ga(std::uint64_t seed) {
  GAConfig config;
  config.population_size = 12;
  config.generations = 8;
  config.elitism_count = 1;
  config.seed = seed;
  return config;
}

// Instance from per-job routings of (machine, duration); releases zero.
Instance shop(int machines, std::vector<std::vector<Operation>> routings) {
  Instance inst;
  inst.machine_count = machines;
  for (auto& routing : routings) inst.jobs.push_back(Job{static_cast<JobId>(inst.jobs.size() + 1), std::move(routing), 0});
  return inst;
}

AntigenUniverse single_antigen_universe(std::string_view text) {
  AntigenUniverse universe;
  universe.antigens.push_back(parse_antigen(text));
  return universe;
}

// Library whose first components spell 9,8,4 followed by filler.
GeneLibrary library_for_984() {
  GeneLibrary lib;
  lib.component_length = 1;
  lib.libraries = {{{9}, {1}, {2}}, {{8}, {3}, {5}}, {{4}, {6}, {7}}};
  return lib;
}

}  // namespace

TEST_CASE("antigen universe shape and determinism") {
  const Instance inst = generate_instance(5, 6, 5, 1, 20);
  const std::vector<Scenario> three(3);
  const AntigenUniverse a = build_antigen_universe(inst, three, small_ga(1));
  CHECK(a.antigens.size() == 15);
  CHECK(a.schedules.size() == 3);
  for (const auto& antigen : a.antigens) CHECK(antigen.sequence.size() == 6);
  const AntigenUniverse b = build_antigen_universe(inst, three, small_ga(1));
  CHECK(a.antigens == b.antigens);

  const Instance one_job = parse_instance("1 3\n0 2 1 3 2 1");
  const AntigenUniverse tiny = build_antigen_universe(one_job, three, small_ga(1));
  CHECK(tiny.antigens.size() == 9);
  for (const auto& antigen : tiny.antigens) CHECK(antigen.sequence == std::vector<JobId>{1});

  CHECK_THROWS_AS(build_antigen_universe(inst, std::vector<Scenario>{}, small_ga(1)), Error);
}

TEST_CASE("schedule search improves on its initial population and is feasible") {
  const Instance inst = generate_instance(8, 6, 4, 1, 30);
  GAConfig config = small_ga(3);
  config.generations = 20;
  const auto r = search_schedule(inst, config);
  CHECK_FALSE(oracle::violation(r.best));
  CHECK(-r.trace.back().best == static_cast<double>(makespan(r.best)));
  CHECK(r.trace.back().best >= r.trace.front().best);
}

TEST_CASE("fitness goes to the single best antibody") {
  const std::vector<Antigen> sample{parse_antigen("984567132"), parse_antigen("123456789"), parse_antigen("5551117")};
  Rng rng(1);

  AntibodyPopulation lone{{ab("56789")}, {}};
  lone = assign_antibody_fitness(lone, sample, rng);
  std::int64_t expected = 0;
  for (const auto& antigen : sample) expected += match_score(ab("56789"), antigen);
  CHECK(lone.fitness == std::vector<std::int64_t>{expected});

  AntibodyPopulation pair{{ab("98"), ab("**")}, {}};
  pair = assign_antibody_fitness(pair, std::vector<Antigen>{sample[0]}, rng);
  CHECK(pair.fitness == std::vector<std::int64_t>{10, 0});

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    AntibodyPopulation twins{{ab("45"), ab("45")}, {}};
    twins = assign_antibody_fitness(twins, std::vector<Antigen>{sample[0]}, r);
    CHECK(twins.fitness[0] + twins.fitness[1] == 10);
    CHECK(std::min(twins.fitness[0], twins.fitness[1]) == 0);
  }

  CHECK_THROWS_AS(assign_antibody_fitness(pair, std::vector<Antigen>{}, rng), Error);
}

TEST_CASE("system fitness") {
  const std::vector<Antigen> one{parse_antigen("984567132")};
  CHECK(system_fitness(one, std::vector<Antibody>{ab("984")}) == 0.0);
  CHECK(system_fitness(one, std::vector<Antibody>{ab("56789")}) == 10.0);
  const std::vector<Antigen> two{parse_antigen("984567132"), parse_antigen("123456789")};
  CHECK(system_fitness(two, std::vector<Antibody>{ab("98456")}) == doctest::Approx(5.0));
}

TEST_CASE("antibody evolution") {
  const AntigenUniverse universe = single_antigen_universe("984567132");
  const GeneLibrary lib = library_for_984();
  GAConfig config = small_ga(4);
  config.generations = 30;

  const EvolutionResult a = evolve_antibodies(lib, universe, config, 1);
  const EvolutionResult b = evolve_antibodies(lib, universe, config, 1);
  CHECK(a.population == b.population);
  CHECK(a.system_fitness_trace == b.system_fitness_trace);
  CHECK(a.system_fitness_trace.size() == config.generations + 1);
  CHECK(a.population.size() == config.population_size);
  for (const auto& antibody : a.population.antibodies) CHECK(antibody.size() == lib.antibody_length());
  CHECK(a.system_fitness_trace.back() == doctest::Approx(system_fitness(universe, a.population.antibodies)));

  // sample larger than the universe, and antibodies as long as an antigen
  CHECK_THROWS_AS(evolve_antibodies(lib, universe, config, 2), Error);
  CHECK_THROWS_AS(evolve_antibodies(lib, single_antigen_universe("984"), config, 1), Error);
}

TEST_CASE("warm-started evolution keeps the seed antibodies in play") {
  const AntigenUniverse universe = single_antigen_universe("984567132");
  GAConfig config = small_ga(6);
  config.generations = 0;
  EvolutionOptions options;
  options.initial = std::vector<Antibody>(config.population_size, ab("984"));
  const EvolutionResult r = evolve_antibodies(library_for_984(), universe, config, 1, options);
  CHECK(r.system_fitness_trace.front() == 0.0);
}

TEST_CASE("somatic recombination") {
  CHECK(somatic_recombination(ab("567"), ab("789")) == ab("56789"));
  CHECK_FALSE(somatic_recombination(ab("12"), ab("34")));
  CHECK(somatic_recombination(ab("1234"), ab("1234")) == ab("1234"));
  // a repeated job in the appended part is masked
  CHECK(somatic_recombination(ab("123"), ab("341")) == ab("1234*"));
}

TEST_CASE("simple recombination") {
  const Instance inst = parse_instance("3 2\n0 1 1 1\n0 1 1 1\n1 1 0 1");

  const AntibodyPopulation exact{{ab("312")}, {1}};
  CHECK(simple_recombination(exact, inst) == MachineSequences{{3, 1, 2}, {3, 1, 2}});

  const AntibodyPopulation conflicting{{ab("1*1"), ab("77")}, {0, 0}};
  CHECK(simple_recombination(conflicting, inst) == MachineSequences{{}, {}});

  const AntibodyPopulation overlap{{ab("12"), ab("23")}, {1, 5}};
  CHECK(simple_recombination(overlap, inst) == MachineSequences{{2, 3}, {2, 3}});

  // a job that does not visit the machine keeps the antibody off it
  const Instance split = shop(2, {{{0, 1}}, {{0, 1}}, {{1, 1}}});
  const AntibodyPopulation mixed{{ab("13"), ab("21")}, {5, 1}};
  CHECK(simple_recombination(mixed, split) == MachineSequences{{2, 1}, {}});
}

TEST_CASE("single job addition") {
  const Instance two = parse_instance("2 2\n0 3 1 2\n1 4 0 1");
  CHECK(single_job_addition({{}, {2, 1}}, two, 0).size() == 2);
  CHECK(single_job_addition({{1, 2}, {2, 1}}, two, 0) == std::vector<JobId>{1, 2});
  CHECK(single_job_addition({{}}, parse_instance("1 1\n0 5"), 0) == std::vector<JobId>{1});

  // m0 partial [1], job 2 missing: compare both insertion points directly
  const Time before = makespan(decode(two, {{2, 1}, {2, 1}}));
  const Time after = makespan(decode(two, {{1, 2}, {2, 1}}));
  const std::vector<JobId> expected = before <= after ? std::vector<JobId>{2, 1} : std::vector<JobId>{1, 2};
  CHECK(single_job_addition({{1}, {2, 1}}, two, 0) == expected);
}

TEST_CASE("single job addition matches brute force for one missing job") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = oracle::random_instance(rng, 5, 3, trial % 3 == 0);
    MachineSequences seqs = oracle::random_sequences(rng, inst);
    const auto m = static_cast<MachineId>(rng.index(static_cast<std::size_t>(inst.machine_count)));
    if (seqs[m].empty()) continue;
    const JobId removed = seqs[m][rng.index(seqs[m].size())];
    std::erase(seqs[m], removed);

    std::vector<JobId> best;
    Time best_ms = -1;
    for (std::size_t pos = 0; pos <= seqs[m].size(); ++pos) {
      MachineSequences candidate = seqs;
      candidate[m].insert(candidate[m].begin() + static_cast<std::ptrdiff_t>(pos), removed);
      const Schedule s = decode(inst, candidate);
      REQUIRE_FALSE(oracle::violation(s));
      if (best_ms < 0 || makespan(s) < best_ms) {
        best_ms = makespan(s);
        best = candidate[m];
      }
    }
    CHECK(single_job_addition(seqs, inst, m) == best);
  }
}

TEST_CASE("build schedule") {
  // jobs 1 and 2 run m0 then m1, job 3 only m1
  const Instance inst = shop(2, {{{0, 3}, {1, 2}}, {{0, 2}, {1, 4}}, {{1, 5}}});
  const AntibodyPopulation spelled{{ab("21"), ab("3")}, {9, 4}};
  const Schedule s = build_schedule(spelled, inst);
  CHECK(s.machine_sequences() == MachineSequences{{2, 1}, {2, 1, 3}});
  CHECK(makespan(s) == makespan(decode(inst, {{2, 1}, {2, 1, 3}})));

  const AntibodyPopulation empty{{ab("77"), ab("**")}, {3, 3}};
  const Schedule fallback = build_schedule(empty, inst);
  CHECK_FALSE(oracle::violation(fallback));
  CHECK(build_schedule(empty, inst) == fallback);
}

TEST_CASE("population text round trip") {
  const AntibodyPopulation pop{{ab("12,*,3"), ab("**")}, {14, 0}};
  CHECK(parse_population(format_population(pop)) == pop);
  CHECK_THROWS_AS(parse_population("1,2 x\n"), Error);
}

TEST_CASE("adding equal-length antibodies never raises system fitness") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Antigen> antigens(3);
    for (auto& antigen : antigens) {
      antigen.sequence.resize(8);
      std::iota(antigen.sequence.begin(), antigen.sequence.end(), 1);
      rng.shuffle(std::span<JobId>(antigen.sequence));
    }
    std::vector<Antibody> set;
    double previous = 0;
    const auto length = static_cast<std::size_t>(rng.uniform_int(1, 4));
    for (int k = 0; k < 6; ++k) {
      Antibody a;
      a.symbols.resize(length);
      for (auto& s : a.symbols) s = rng.bernoulli(0.2) ? kWildcard : static_cast<JobId>(rng.uniform_int(1, 8));
      set.push_back(a);
      const double now = system_fitness(antigens, set);
      if (k > 0) CHECK(now <= previous);
      previous = now;
    }
  }
}

TEST_CASE("build schedule is always feasible") {
  Rng rng(500);
  for (int trial = 0; trial < 500; ++trial) {
    const Instance inst = oracle::random_instance(rng, 6, 4, trial % 2 == 0);
    AntibodyPopulation pop;
    const auto count = rng.uniform_int(1, 6);
    for (int k = 0; k < count; ++k) {
      Antibody a;
      a.symbols.resize(static_cast<std::size_t>(rng.uniform_int(1, 4)));
      for (auto& s : a.symbols) s = rng.bernoulli(0.2) ? kWildcard : static_cast<JobId>(rng.uniform_int(1, 7));
      pop.antibodies.push_back(a);
      pop.fitness.push_back(rng.uniform_int(0, 20));
    }
    const Schedule s = build_schedule(pop, inst);
    CHECK_FALSE(oracle::violation(s));
    for (MachineId m = 0; m < inst.machine_count; ++m) {
      auto seq = s.machine_sequences()[m];
      std::sort(seq.begin(), seq.end());
      CHECK(seq == inst.jobs_on(m));
    }
  }
}
