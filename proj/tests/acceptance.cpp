// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Detail lines are indented.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aisched/ais.hpp"
#include "aisched/gene_library.hpp"
#include "aisched/harness.hpp"
#include "oracles.hpp"

#ifndef AISCHED_CLI_PATH
#error "AISCHED_CLI_PATH must point at the command-line binary"
#endif

using namespace aisched;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome worked_example() {
  const int score = match_score(parse_antibody("56789"), parse_antigen("984567132"));
  return {score == 15, "match_score(56789, 984567132) = " + std::to_string(score)};
}

Outcome match_oracle() {
  Rng rng(0xc2);
  int agree = 0;
  const int total = 10000;
  for (int i = 0; i < total; ++i) {
    std::vector<JobId> antigen(static_cast<std::size_t>(rng.uniform_int(7, 15)));
    for (auto& s : antigen) s = static_cast<JobId>(rng.uniform_int(1, 15));
    std::vector<JobId> antibody(static_cast<std::size_t>(rng.uniform_int(2, 6)));
    for (auto& s : antibody) s = rng.bernoulli(0.2) ? kWildcard : static_cast<JobId>(rng.uniform_int(1, 15));
    agree += match_score(antibody, antigen) == oracle::match_score(antibody, antigen);
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " pairs agree with brute force"};
}

Outcome library_combinatorics() {
  std::vector<JobId> ids(15);
  std::iota(ids.begin(), ids.end(), 1);
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t l = 1; l <= 3; ++l) {
    for (std::size_t c = 1; c <= 4; ++c) {
      const GeneLibrary random_lib = init_libraries(derive_seed(l, {c}), l, c, 2, ids, 0.2);
      // components made of unique job ids, so every tuple spells a different antibody
      GeneLibrary unique_lib;
      unique_lib.component_length = 2;
      JobId next = 1;
      for (std::size_t i = 0; i < l; ++i) {
        unique_lib.libraries.emplace_back();
        for (std::size_t k = 0; k < c; ++k) {
          unique_lib.libraries.back().push_back({next, next + 1});
          next += 2;
        }
      }

      std::size_t tuples = 0;
      std::set<std::vector<JobId>> distinct;
      std::vector<std::size_t> idx(l, 0);
      while (true) {
        const Antibody a = express(random_lib, idx);
        ok &= a.size() == 2 * l;
        distinct.insert(express(unique_lib, idx).symbols);
        ++tuples;
        std::size_t d = 0;
        while (d < l && ++idx[d] == c) idx[d++] = 0;
        if (d == l) break;
      }
      std::uint64_t expected = 1;
      for (std::size_t i = 0; i < l; ++i) expected *= c;
      ok &= tuples == expected && distinct.size() == expected && expressible_count(l, c) == expected;
    }
  }
  detail << "all (l, c) in {1,2,3} x {1,2,3,4} express c^l antibodies";
  return {ok, detail.str()};
}

Outcome schedule_feasibility() {
  Rng rng(0xdec0de);
  int feasible = 0, exact = 0, repaired = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    const Instance inst = oracle::random_instance(rng, 8, 5, i % 2 == 1);
    const MachineSequences given = oracle::random_sequences(rng, inst);
    const Schedule s = decode(inst, given);
    repaired += s.machine_sequences() != given;
    if (oracle::violation(s)) continue;
    ++feasible;
    const auto expected = oracle::fixed_order_makespan(inst, s.machine_sequences());
    exact += expected && *expected == makespan(s);
  }
  std::ostringstream detail;
  detail << feasible << "/" << total << " feasible, " << exact << "/" << total << " makespans match the longest-path oracle, "
         << repaired << " needed deadlock repair";
  return {feasible == total && exact == total && repaired > 0, detail.str()};
}

Outcome permutation_safety() {
  Rng rng(0x9e);
  int kept = 0;
  const int total = 10000;
  for (int i = 0; i < total; ++i) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 12));
    Genome p1(n), p2(n);
    std::iota(p1.begin(), p1.end(), 1);
    std::iota(p2.begin(), p2.end(), 1);
    rng.shuffle(std::span<JobId>(p1));
    rng.shuffle(std::span<JobId>(p2));
    Genome child;
    switch (i % 4) {
      case 0: child = order_based_crossover(p1, p2, rng); break;
      case 1: child = two_point_crossover(p1, p2, rng); break;
      case 2: child = overlap_crossover(p1, p2); break;
      default:
        child = p1;
        swap_mutation(child, rng);
    }
    Genome sorted = child;
    std::sort(sorted.begin(), sorted.end());
    Genome reference(n);
    std::iota(reference.begin(), reference.end(), 1);
    kept += sorted == reference;
  }
  return {kept == total, std::to_string(kept) + "/" + std::to_string(total) + " children are permutations"};
}

Outcome winner_take_score() {
  Rng rng(0x77);
  int good = 0;
  const int total = 1000;
  for (int i = 0; i < total; ++i) {
    Antigen antigen;
    antigen.sequence.resize(static_cast<std::size_t>(rng.uniform_int(6, 12)));
    for (auto& s : antigen.sequence) s = static_cast<JobId>(rng.uniform_int(1, 9));
    AntibodyPopulation pop;
    const auto count = static_cast<std::size_t>(rng.uniform_int(2, 10));
    for (std::size_t k = 0; k < count; ++k) {
      if (k > 0 && rng.bernoulli(0.3)) {
        pop.antibodies.push_back(pop.antibodies[rng.index(k)]);  // forced tie
      } else {
        Antibody a;
        a.symbols.resize(static_cast<std::size_t>(rng.uniform_int(2, 5)));
        for (auto& s : a.symbols) s = rng.bernoulli(0.2) ? kWildcard : static_cast<JobId>(rng.uniform_int(1, 9));
        pop.antibodies.push_back(a);
      }
      pop.fitness.push_back(rng.uniform_int(0, 50));
    }
    int best = 0;
    for (const auto& a : pop.antibodies) best = std::max(best, oracle::match_score(a.symbols, antigen.sequence));

    Rng assign_rng(derive_seed(0x77, {static_cast<std::uint64_t>(i)}));
    const AntibodyPopulation after = assign_antibody_fitness(pop, std::vector<Antigen>{antigen}, assign_rng);
    int gainers = 0;
    bool right_amount = true;
    for (std::size_t k = 0; k < count; ++k) {
      const auto gain = after.fitness[k] - pop.fitness[k];
      if (gain == 0) continue;
      ++gainers;
      right_amount &= gain == best && oracle::match_score(pop.antibodies[k].symbols, antigen.sequence) == best;
    }
    good += (best == 0 ? gainers == 0 : gainers == 1) && right_amount;
  }
  return {good == total, std::to_string(good) + "/" + std::to_string(total) + " assignments credit exactly one winner with the max score"};
}

Outcome convergence() {
  AntigenUniverse universe;
  universe.antigens.push_back(parse_antigen("984567132"));
  std::vector<JobId> ids(9);
  std::iota(ids.begin(), ids.end(), 1);

  int reached = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneLibrary lib = init_libraries(derive_seed(seed, {0x984}), 3, 4, 1, ids, 0.1);
    lib.libraries[0][0] = {9};
    lib.libraries[1][0] = {8};
    lib.libraries[2][0] = {4};
    GAConfig config;
    config.population_size = 30;
    config.generations = 200;
    config.mutation_rate = 0.3;
    config.elitism_count = 2;
    config.seed = seed;
    const EvolutionResult r = evolve_antibodies(lib, universe, config, 1);
    const auto hit = std::find(r.system_fitness_trace.begin(), r.system_fitness_trace.end(), 0.0);
    if (hit != r.system_fitness_trace.end()) {
      ++reached;
      detail << " " << (hit - r.system_fitness_trace.begin());
    } else {
      detail << " -";
    }
  }
  return {reached >= 8, std::to_string(reached) + "/10 seeds reach system fitness 0; generation reached per seed:" + detail.str()};
}

Outcome desk_experiment() {
  ExperimentConfig config;
  config.instance.jobs = 10;
  config.instance.machines = 5;
  config.scenario_count = 10;
  config.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const ExperimentResult result = execute_experiment(config);

  bool feasible = true;
  double ais_total = 0, ga_total = 0;
  std::size_t n = 0;
  int more_robust = 0;
  for (const auto& run : result.runs) {
    for (std::size_t s = 0; s < run.ais.schedules.size(); ++s) {
      feasible &= !oracle::violation(run.ais.schedules[s]) && !oracle::violation(run.ga.schedules[s]);
      ais_total += static_cast<double>(makespan(run.ais.schedules[s]));
      ga_total += static_cast<double>(makespan(run.ga.schedules[s]));
      ++n;
    }
    more_robust += run.ais.robustness.mean >= run.ga.robustness.mean;
    std::cout << "    seed " << run.seed << ": robustness ais " << std::fixed << std::setprecision(3) << run.ais.robustness.mean
              << " ga " << run.ga.robustness.mean << "\n";
  }
  const double ais_mean = ais_total / static_cast<double>(n);
  const double ga_mean = ga_total / static_cast<double>(n);
  const double ratio = ais_mean / ga_mean;
  std::cout << "    AIS at least as robust on " << more_robust << "/10 seeds (logged, not asserted)\n";
  std::ostringstream detail;
  detail << std::fixed << std::setprecision(2) << "all schedules " << (feasible ? "feasible" : "NOT feasible") << ", mean makespan AIS "
         << ais_mean << " vs GA " << ga_mean << " (ratio " << std::setprecision(3) << ratio << ", bound 1.200)";
  return {feasible && ratio <= 1.2, detail.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool run_cli(const std::string& args) {
  const std::string command = std::string("\"") + AISCHED_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(command.c_str()) == 0;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "aisched_acceptance_determinism";
  fs::remove_all(root);
  const std::string budget =
      " --seed 5 --jobs 6 --machines 3 --scenario-count 3 --pop-size 12 --generations 10 --schedule-pop-size 10"
      " --schedule-generations 10 --libraries 2 --components 3 --component-len 2";
  std::vector<std::string> names;
  bool ran = true;
  for (const std::string round : {"a", "b"}) {
    const fs::path dir = root / round;
    fs::create_directories(dir);
    {
      std::ofstream scenario(dir / "scenario.json");
      scenario << R"({"arrival_shifts": {"2": 4}, "new_jobs": [{"routing": [[0, 5], [2, 3]], "release": 1}], "breakdowns": [{"machine": 1, "start": 10, "end": 25}]})";
    }
    const std::string d = "\"" + dir.string() + "/";
    const std::string inst = " --instance " + d + "instance.txt\"";
    ran &= run_cli("gen --seed 5 --jobs 6 --machines 3 --out " + d + "instance.txt\"");
    ran &= run_cli("universe" + budget + inst + " --out " + d + "universe.csv\"");
    ran &= run_cli("universe" + budget + inst + " --format json --out " + d + "universe.json\"");
    ran &= run_cli("evolve" + budget + inst + " --out " + d + "population.txt\"");
    ran &= run_cli("schedule" + budget + inst + " --population " + d + "population.txt\" --out " + d + "schedule.csv\"");
    ran &= run_cli("experiment" + budget + inst + " --seeds 1 2 --out " + d + "experiment\"");
    ran &= run_cli("reschedule" + budget + inst + " --population " + d + "population.txt\" --scenario " + d +
                   "scenario.json\" --format json --out " + d + "reschedule.json\"");
  }
  if (!ran) return {false, "a command exited with an error"};

  std::size_t compared = 0, identical = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), root / "a");
    ++compared;
    const fs::path twin = root / "b" / rel;
    identical += fs::exists(twin) && slurp(entry.path()) == slurp(twin) && !slurp(twin).empty();
  }
  fs::remove_all(root);
  return {compared >= 9 && identical == compared,
          std::to_string(identical) + "/" + std::to_string(compared) + " output files byte-identical across repeated runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"worked match example", worked_example},
      {"match score vs brute force", match_oracle},
      {"library combinatorics", library_combinatorics},
      {"schedule feasibility", schedule_feasibility},
      {"permutation safety", permutation_safety},
      {"winner takes the score", winner_take_score},
      {"convergence sanity", convergence},
      {"desk experiment", desk_experiment},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << " (" << criteria[i].first << "): " << outcome.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
