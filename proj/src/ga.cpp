#include "aisched/ga.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "aisched/error.hpp"
#include "aisched/matching.hpp"

namespace aisched {

std::string_view to_string(CrossoverKind kind) {
  switch (kind) {
    case CrossoverKind::OrderBased: return "obx";
    case CrossoverKind::TwoPoint: return "2pt";
    case CrossoverKind::Overlap: return "overlap";
  }
  return "obx";
}

CrossoverKind parse_crossover(std::string_view name) {
  if (name == "obx") return CrossoverKind::OrderBased;
  if (name == "2pt") return CrossoverKind::TwoPoint;
  if (name == "overlap") return CrossoverKind::Overlap;
  throw Error(ErrorCode::InvalidConfig, "unknown crossover \"" + std::string(name) + "\" (expected obx, 2pt or overlap)");
}

void GAConfig::validate() const {
  if (population_size < 2) throw Error(ErrorCode::InvalidConfig, "population_size must be at least 2");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw Error(ErrorCode::InvalidConfig, "crossover_rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw Error(ErrorCode::InvalidConfig, "mutation_rate must lie in [0, 1]");
  if (tournament_size < 1) throw Error(ErrorCode::InvalidConfig, "tournament_size must be at least 1");
  if (elitism_count >= population_size) throw Error(ErrorCode::InvalidConfig, "elitism_count must be below population_size");
}

bool is_permutation_pair(std::span<const JobId> p1, std::span<const JobId> p2) {
  if (p1.size() != p2.size()) return false;
  std::vector<JobId> a(p1.begin(), p1.end());
  std::vector<JobId> b(p2.begin(), p2.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return false;
  if (!a.empty() && a.front() == kWildcard) return false;
  return std::adjacent_find(a.begin(), a.end()) == a.end();
}

Genome order_based_crossover(const Genome& p1, const Genome& p2, std::span<const std::size_t> positions) {
  if (!is_permutation_pair(p1, p2)) throw Error(ErrorCode::MismatchedParents, "order-based crossover needs permutation parents");
  std::vector<std::size_t> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!sorted.empty() && sorted.back() >= p1.size()) throw Error(ErrorCode::MismatchedParents, "crossover position out of range");

  std::unordered_set<JobId> chosen;
  for (auto pos : sorted) chosen.insert(p1[pos]);
  Genome child = p1;
  std::size_t next = 0;
  for (JobId token : p2) {
    if (chosen.contains(token)) child[sorted[next++]] = token;
  }
  return child;
}

Genome order_based_crossover(const Genome& p1, const Genome& p2, Rng& rng) {
  if (!is_permutation_pair(p1, p2)) throw Error(ErrorCode::MismatchedParents, "order-based crossover needs permutation parents");
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (rng.bernoulli(0.5)) positions.push_back(i);
  }
  return order_based_crossover(p1, p2, positions);
}

Genome two_point_crossover(const Genome& p1, const Genome& p2, std::size_t cut_a, std::size_t cut_b) {
  if (p1.size() != p2.size()) throw Error(ErrorCode::MismatchedParents, "two-point crossover needs equal-length parents");
  if (cut_a > cut_b || cut_b > p1.size()) throw Error(ErrorCode::MismatchedParents, "cut points must satisfy a <= b <= length");
  const bool permutation = is_permutation_pair(p1, p2);

  Genome child = p1;
  std::unordered_set<JobId> inside;
  for (std::size_t i = cut_a; i < cut_b; ++i) {
    child[i] = p2[i];
    if (p2[i] != kWildcard) inside.insert(p2[i]);
  }

  std::vector<JobId> missing;
  if (permutation) {
    std::unordered_set<JobId> present(inside);
    for (std::size_t i = 0; i < child.size(); ++i) {
      if (i < cut_a || i >= cut_b) present.insert(child[i]);
    }
    for (JobId token : p1) {
      if (!present.contains(token)) missing.push_back(token);
    }
  }
  std::size_t next_missing = 0;
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (i >= cut_a && i < cut_b) continue;
    if (child[i] == kWildcard || !inside.contains(child[i])) continue;
    child[i] = permutation ? missing[next_missing++] : kWildcard;
  }
  return child;
}

Genome two_point_crossover(const Genome& p1, const Genome& p2, Rng& rng) {
  if (p1.size() != p2.size()) throw Error(ErrorCode::MismatchedParents, "two-point crossover needs equal-length parents");
  auto a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(p1.size())));
  auto b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(p1.size())));
  if (a > b) std::swap(a, b);
  return two_point_crossover(p1, p2, a, b);
}

Genome overlap_crossover(const Genome& p1, const Genome& p2) {
  // Longest common run of non-wildcard symbols; strict '>' keeps the earliest
  // position in p1, then in p2.
  std::size_t best_len = 0;
  std::size_t best_end1 = 0;
  std::size_t best_end2 = 0;
  std::vector<std::size_t> prev(p2.size() + 1, 0);
  std::vector<std::size_t> cur(p2.size() + 1, 0);
  for (std::size_t i = 1; i <= p1.size(); ++i) {
    for (std::size_t j = 1; j <= p2.size(); ++j) {
      const bool same = p1[i - 1] == p2[j - 1] && p1[i - 1] != kWildcard;
      cur[j] = same ? prev[j - 1] + 1 : 0;
      if (cur[j] > best_len) {
        best_len = cur[j];
        best_end1 = i;
        best_end2 = j;
      }
    }
    std::swap(prev, cur);
  }
  if (best_len == 0) return p1;

  const bool permutation = is_permutation_pair(p1, p2);
  Genome child(p1.begin(), p1.begin() + static_cast<std::ptrdiff_t>(best_end1));
  std::unordered_set<JobId> seen;
  for (JobId token : child) {
    if (token != kWildcard) seen.insert(token);
  }
  for (std::size_t j = best_end2; j < p2.size(); ++j) {
    const JobId token = p2[j];
    if (token == kWildcard || seen.insert(token).second) {
      child.push_back(token);
    } else if (!permutation) {
      child.push_back(kWildcard);
    }
  }
  if (permutation) {
    for (JobId token : p1) {
      if (!seen.contains(token)) {
        child.push_back(token);
        seen.insert(token);
      }
    }
  }
  return child;
}

void swap_mutation(Genome& genome, Rng& rng) {
  if (genome.size() < 2) return;
  const std::size_t i = rng.index(genome.size());
  std::size_t j = rng.index(genome.size() - 1);
  if (j >= i) ++j;
  std::swap(genome[i], genome[j]);
}

CrossoverFn crossover_operator(CrossoverKind kind) {
  switch (kind) {
    case CrossoverKind::OrderBased:
      return [](const Genome& a, const Genome& b, Rng& rng) { return order_based_crossover(a, b, rng); };
    case CrossoverKind::TwoPoint:
      return [](const Genome& a, const Genome& b, Rng& rng) { return two_point_crossover(a, b, rng); };
    case CrossoverKind::Overlap:
      return [](const Genome& a, const Genome& b, Rng&) { return overlap_crossover(a, b); };
  }
  throw Error(ErrorCode::InvalidConfig, "unknown crossover kind");
}

GenerationStats summarize(std::size_t generation, std::span<const double> fitness) {
  GenerationStats stats;
  stats.generation = generation;
  if (fitness.empty()) return stats;
  stats.best = *std::max_element(fitness.begin(), fitness.end());
  stats.worst = *std::min_element(fitness.begin(), fitness.end());
  stats.mean = std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
  return stats;
}

std::string format_trace_csv(std::span<const GenerationStats> trace) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "generation,best,mean,worst\n";
  for (const auto& row : trace) out << row.generation << ',' << row.best << ',' << row.mean << ',' << row.worst << '\n';
  return out.str();
}

std::size_t best_index(std::span<const double> fitness) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < fitness.size(); ++i) {
    if (fitness[i] > fitness[best]) best = i;
  }
  return best;
}

namespace {

std::size_t tournament(std::span<const double> fitness, std::size_t size, Rng& rng) {
  std::size_t winner = rng.index(fitness.size());
  for (std::size_t k = 1; k < size; ++k) {
    const std::size_t challenger = rng.index(fitness.size());
    if (fitness[challenger] > fitness[winner] || (fitness[challenger] == fitness[winner] && challenger < winner)) {
      winner = challenger;
    }
  }
  return winner;
}

}  // namespace

std::vector<Genome> next_generation(const GAConfig& config, std::span<const Genome> population, std::span<const double> fitness,
                                    const GAOperators& operators, Rng& rng) {
  config.validate();
  if (population.empty()) throw Error(ErrorCode::EmptyPopulation, "cannot breed an empty population");
  if (fitness.size() != population.size()) throw Error(ErrorCode::InvalidConfig, "one fitness value per genome required");

  std::vector<std::size_t> ranked(population.size());
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

  std::vector<Genome> next;
  next.reserve(config.population_size);
  for (std::size_t e = 0; e < config.elitism_count && e < ranked.size(); ++e) next.push_back(population[ranked[e]]);

  while (next.size() < config.population_size) {
    const std::size_t a = tournament(fitness, config.tournament_size, rng);
    const std::size_t b = tournament(fitness, config.tournament_size, rng);
    Genome child = rng.bernoulli(config.crossover_rate) ? operators.crossover(population[a], population[b], rng) : population[a];
    if (rng.bernoulli(config.mutation_rate)) operators.mutation(child, rng);
    next.push_back(std::move(child));
  }
  return next;
}

GAResult run_ga(const GAConfig& config, std::vector<Genome> initial, const FitnessFn& fitness, const GAOperators& operators) {
  config.validate();
  if (initial.empty()) throw Error(ErrorCode::EmptyPopulation, "initial population is empty");
  if (initial.size() != config.population_size) {
    throw Error(ErrorCode::InvalidConfig, "initial population holds " + std::to_string(initial.size()) + " genomes, expected " +
                                              std::to_string(config.population_size));
  }

  Rng rng(derive_seed(config.seed, {0x6a}));
  GAResult result;
  result.population = std::move(initial);

  const auto evaluate = [&] {
    result.fitness.resize(result.population.size());
    for (std::size_t i = 0; i < result.population.size(); ++i) result.fitness[i] = fitness(result.population[i]);
  };

  evaluate();
  std::size_t best = best_index(result.fitness);
  result.best = result.population[best];
  result.best_fitness = result.fitness[best];
  result.trace.push_back(summarize(0, result.fitness));

  for (std::size_t g = 1; g <= config.generations; ++g) {
    result.population = next_generation(config, result.population, result.fitness, operators, rng);
    evaluate();
    best = best_index(result.fitness);
    if (result.fitness[best] > result.best_fitness) {
      result.best = result.population[best];
      result.best_fitness = result.fitness[best];
    }
    result.trace.push_back(summarize(g, result.fitness));
  }
  return result;
}

}  // namespace aisched
