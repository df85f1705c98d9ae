#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aisched {

using JobId = int;       // 1-based; 0 is reserved for the antibody wildcard
using MachineId = int;   // 0-based
using Time = std::int64_t;

struct Operation {
  MachineId machine = 0;
  Time duration = 0;

  bool operator==(const Operation&) const = default;
};

struct Job {
  JobId id = 0;
  std::vector<Operation> routing;
  Time release = 0;

  bool operator==(const Job&) const = default;
};

/// A machine is unavailable over [start, end).
struct Breakdown {
  MachineId machine = 0;
  Time start = 0;
  Time end = 0;

  bool operator==(const Breakdown&) const = default;
};

struct Instance {
  std::vector<Job> jobs;  // jobs[i].id == i + 1
  int machine_count = 0;
  std::vector<Breakdown> breakdowns;

  int job_count() const { return static_cast<int>(jobs.size()); }
  const Job& job(JobId id) const { return jobs.at(static_cast<std::size_t>(id - 1)); }

  /// Jobs whose routing visits `machine`, ascending by id.
  std::vector<JobId> jobs_on(MachineId machine) const;

  bool operator==(const Instance&) const = default;
};

/// Throws Error if the instance violates its structural invariants.
void validate(const Instance& instance);

/// A perturbation of the shop: arrival-date changes, extra jobs, breakdowns.
struct Scenario {
  std::map<JobId, Time> arrival_shifts;
  std::vector<Job> new_jobs;  // ids are reassigned on application
  std::vector<Breakdown> breakdowns;

  bool empty() const { return arrival_shifts.empty() && new_jobs.empty() && breakdowns.empty(); }
  bool operator==(const Scenario&) const = default;
};

using MachineSequences = std::vector<std::vector<JobId>>;

class Schedule {
 public:
  Schedule(Instance instance, MachineSequences sequences, std::vector<std::vector<Time>> starts)
      : instance_(std::move(instance)), sequences_(std::move(sequences)), starts_(std::move(starts)) {}

  const Instance& instance() const { return instance_; }
  const MachineSequences& machine_sequences() const { return sequences_; }

  /// Start time of the operation at routing position `pos` of job `job`.
  Time start(JobId job, std::size_t pos) const { return starts_.at(static_cast<std::size_t>(job - 1)).at(pos); }
  Time end(JobId job, std::size_t pos) const { return start(job, pos) + instance_.job(job).routing.at(pos).duration; }
  const std::vector<std::vector<Time>>& starts() const { return starts_; }

  bool operator==(const Schedule&) const = default;

 private:
  Instance instance_;
  MachineSequences sequences_;
  std::vector<std::vector<Time>> starts_;
};

// Instance file I/O. Line 1 is `J M`, then one line per job of `machine
// duration` pairs in routing order, then an optional `releases r1 .. rJ`.
Instance parse_instance(std::string_view text);
std::string format_instance(const Instance& instance);
Instance load_instance(const std::string& path);

Instance generate_instance(std::uint64_t seed, int jobs, int machines, Time duration_lo, Time duration_hi);

/// Returns a new instance: shifted releases (clamped at zero), new jobs
/// appended with fresh ids, breakdown windows attached.
Instance apply_scenario(const Instance& instance, const Scenario& scenario);

// Scenario files are JSON objects with `arrival_shifts` ({"job id": delta}),
// `new_jobs` ([{"routing": [{"machine", "duration"}], "release"}]) and
// `breakdowns` ([{"machine", "start", "end"}]). A suite is either one such
// object or an array of them.
Scenario parse_scenario(std::string_view json_text);
std::vector<Scenario> parse_scenario_suite(std::string_view json_text);
std::string format_scenario_suite(std::span<const Scenario> scenarios);

/// Random perturbations for experiment suites: release shifts, occasional
/// breakdown, occasional extra job. Deterministic per seed.
struct ScenarioGenerator {
  double shift_probability = 0.3;
  double breakdown_probability = 0.3;
  double new_job_probability = 0.2;
};
std::vector<Scenario> generate_scenarios(std::uint64_t seed, const Instance& instance, int count,
                                         const ScenarioGenerator& params = {});

/// Semi-active decoding of a set of machine orders. Circular waits are broken
/// by moving the ready operation that is nearest the head of its machine's
/// remaining order to the front; the repaired orders are kept in the result.
Schedule decode(const Instance& instance, const MachineSequences& sequences);

Time makespan(const Schedule& schedule);

/// Checks every schedule invariant; returns a description of the first
/// violation, or nullopt when the schedule is feasible.
std::optional<std::string> find_violation(const Schedule& schedule);

}  // namespace aisched
