#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisched/jssp.hpp"

namespace aisched {

/// Antibody symbol that matches any job.
inline constexpr JobId kWildcard = 0;

inline constexpr int kPerfectMatchScore = 5;
inline constexpr int kWildcardMatchScore = 1;

/// The job order on one machine in the best schedule found for one scenario.
struct Antigen {
  std::vector<JobId> sequence;
  MachineId machine = 0;
  int scenario_id = 0;

  bool operator==(const Antigen&) const = default;
};

/// A short job sequence, possibly with wildcards; a schedule building block.
struct Antibody {
  std::vector<JobId> symbols;

  std::size_t size() const { return symbols.size(); }
  std::size_t wildcard_count() const;

  bool operator==(const Antibody&) const = default;
};

/// Score of `antibody` laid over `antigen` starting at `offset`: 5 per exact
/// job match, 1 per wildcard, 0 otherwise.
int alignment_score(std::span<const JobId> antibody, std::span<const JobId> antigen, std::size_t offset);
int alignment_score(const Antibody& antibody, const Antigen& antigen, std::size_t offset);

/// Best alignment score over every offset that keeps the antibody inside the
/// antigen. The antibody must be strictly shorter than the antigen.
int match_score(std::span<const JobId> antibody, std::span<const JobId> antigen);
int match_score(const Antibody& antibody, const Antigen& antigen);

/// How far the best-scoring antibody (first one on ties) falls short of a
/// perfect match on `antigen`: 5 * len - score. Zero means fully matched.
int antigen_deficit(const Antigen& antigen, std::span<const Antibody> antibodies);

/// Comma-separated decimal ids with `*` for wildcards, e.g. "5,6,*,8".
std::string format_symbols(std::span<const JobId> symbols);

/// Inverse of format_symbols. A comma-free string such as "56789" or "5*7" is
/// read one character per symbol.
std::vector<JobId> parse_symbols(std::string_view text);

inline Antibody parse_antibody(std::string_view text) { return Antibody{parse_symbols(text)}; }
inline Antigen parse_antigen(std::string_view text, MachineId machine = 0, int scenario_id = 0) {
  return Antigen{parse_symbols(text), machine, scenario_id};
}

}  // namespace aisched
