#include "aisched/jssp.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aisched/error.hpp"
#include "aisched/random.hpp"

namespace aisched {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::optional<std::int64_t> parse_int(std::string_view token) {
  std::int64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string_view> content_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!split_tokens(line).empty()) lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

void validate_routing(const Job& job, int machine_count) {
  if (job.routing.empty()) throw Error(ErrorCode::MissingOperations, "job " + std::to_string(job.id) + " has no operations");
  std::vector<bool> seen(static_cast<std::size_t>(std::max(machine_count, 0)), false);
  for (const auto& op : job.routing) {
    if (op.machine < 0 || op.machine >= machine_count) {
      throw Error(ErrorCode::BadMachineIndex, "job " + std::to_string(job.id) + " uses machine " + std::to_string(op.machine));
    }
    if (seen[static_cast<std::size_t>(op.machine)]) {
      throw Error(ErrorCode::BadMachineIndex,
                  "job " + std::to_string(job.id) + " visits machine " + std::to_string(op.machine) + " twice");
    }
    seen[static_cast<std::size_t>(op.machine)] = true;
    if (op.duration <= 0) throw Error(ErrorCode::BadDuration, "job " + std::to_string(job.id) + " has a non-positive duration");
  }
}

Time mean_duration(const Instance& instance) {
  Time total = 0;
  Time count = 0;
  for (const auto& job : instance.jobs) {
    for (const auto& op : job.routing) {
      total += op.duration;
      ++count;
    }
  }
  return count == 0 ? 1 : std::max<Time>(1, total / count);
}

// Max of the longest job and the most loaded machine.
Time makespan_lower_bound(const Instance& instance) {
  Time bound = 1;
  std::vector<Time> load(static_cast<std::size_t>(instance.machine_count), 0);
  for (const auto& job : instance.jobs) {
    Time length = job.release;
    for (const auto& op : job.routing) {
      length += op.duration;
      load[static_cast<std::size_t>(op.machine)] += op.duration;
    }
    bound = std::max(bound, length);
  }
  for (auto l : load) bound = std::max(bound, l);
  return bound;
}

Time earliest_fit(Time start, Time duration, std::span<const Breakdown> windows) {
  bool moved = true;
  while (moved) {
    moved = false;
    for (const auto& w : windows) {
      if (start < w.end && w.start < start + duration) {
        start = w.end;
        moved = true;
      }
    }
  }
  return start;
}

}  // namespace

std::vector<JobId> Instance::jobs_on(MachineId machine) const {
  std::vector<JobId> ids;
  for (const auto& job : jobs) {
    for (const auto& op : job.routing) {
      if (op.machine == machine) {
        ids.push_back(job.id);
        break;
      }
    }
  }
  return ids;
}

void validate(const Instance& instance) {
  if (instance.machine_count <= 0 || instance.jobs.empty()) throw Error(ErrorCode::InvalidSize, "instance needs at least one job and one machine");
  for (std::size_t i = 0; i < instance.jobs.size(); ++i) {
    const Job& job = instance.jobs[i];
    if (job.id != static_cast<JobId>(i + 1)) throw Error(ErrorCode::UnknownJob, "job ids must be 1..J in order");
    if (job.release < 0) throw Error(ErrorCode::InvalidScenario, "negative release for job " + std::to_string(job.id));
    validate_routing(job, instance.machine_count);
  }
  for (const auto& b : instance.breakdowns) {
    if (b.machine < 0 || b.machine >= instance.machine_count) throw Error(ErrorCode::UnknownMachine, "breakdown on machine " + std::to_string(b.machine));
    if (!(b.start < b.end) || b.start < 0) throw Error(ErrorCode::InvalidScenario, "breakdown window must satisfy 0 <= start < end");
  }
}

Instance parse_instance(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedHeader, "empty instance text");

  const auto header = split_tokens(lines[0]);
  if (header.size() != 2) throw Error(ErrorCode::MalformedHeader, "expected `J M` on the first line");
  const auto job_count = parse_int(header[0]);
  const auto machine_count = parse_int(header[1]);
  if (!job_count || !machine_count || *job_count <= 0 || *machine_count <= 0) {
    throw Error(ErrorCode::MalformedHeader, "job and machine counts must be positive integers");
  }

  Instance instance;
  instance.machine_count = static_cast<int>(*machine_count);
  for (std::int64_t j = 0; j < *job_count; ++j) {
    const auto line_index = static_cast<std::size_t>(j + 1);
    if (line_index >= lines.size()) {
      throw Error(ErrorCode::MissingOperations, "missing line for job " + std::to_string(j + 1));
    }
    const auto tokens = split_tokens(lines[line_index]);
    const auto expected = static_cast<std::size_t>(2 * *machine_count);
    if (tokens.size() < expected) {
      throw Error(ErrorCode::MissingOperations, "job " + std::to_string(j + 1) + " lists fewer than " +
                                                    std::to_string(*machine_count) + " operations");
    }
    if (tokens.size() > expected) throw Error(ErrorCode::MalformedLine, "job " + std::to_string(j + 1) + " has trailing tokens");

    Job job;
    job.id = static_cast<JobId>(j + 1);
    for (std::size_t k = 0; k < tokens.size(); k += 2) {
      const auto machine = parse_int(tokens[k]);
      const auto duration = parse_int(tokens[k + 1]);
      if (!machine || !duration) throw Error(ErrorCode::MalformedLine, "non-integer token on job line " + std::to_string(j + 1));
      job.routing.push_back({static_cast<MachineId>(*machine), *duration});
    }
    validate_routing(job, instance.machine_count);
    instance.jobs.push_back(std::move(job));
  }

  const auto after = static_cast<std::size_t>(*job_count + 1);
  if (after < lines.size()) {
    const auto tokens = split_tokens(lines[after]);
    if (tokens.front() != "releases" || tokens.size() != instance.jobs.size() + 1 || after + 1 != lines.size()) {
      throw Error(ErrorCode::MalformedLine, "unexpected content after job lines");
    }
    for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
      const auto release = parse_int(tokens[j + 1]);
      if (!release || *release < 0) throw Error(ErrorCode::MalformedLine, "releases must be non-negative integers");
      instance.jobs[j].release = *release;
    }
  }
  return instance;
}

std::string format_instance(const Instance& instance) {
  std::ostringstream out;
  out << instance.job_count() << ' ' << instance.machine_count << '\n';
  bool any_release = false;
  for (const auto& job : instance.jobs) {
    for (std::size_t k = 0; k < job.routing.size(); ++k) {
      if (k > 0) out << ' ';
      out << job.routing[k].machine << ' ' << job.routing[k].duration;
    }
    out << '\n';
    any_release = any_release || job.release != 0;
  }
  if (any_release) {
    out << "releases";
    for (const auto& job : instance.jobs) out << ' ' << job.release;
    out << '\n';
  }
  return out.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileError, "cannot open instance file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

Instance generate_instance(std::uint64_t seed, int jobs, int machines, Time duration_lo, Time duration_hi) {
  if (jobs <= 0 || machines <= 0) throw Error(ErrorCode::InvalidSize, "generator needs J >= 1 and M >= 1");
  if (duration_lo < 1 || duration_lo > duration_hi) throw Error(ErrorCode::InvalidSize, "duration range must satisfy 1 <= lo <= hi");

  Rng rng(derive_seed(seed, {0x1257}));
  Instance instance;
  instance.machine_count = machines;
  std::vector<MachineId> order(static_cast<std::size_t>(machines));
  for (int j = 0; j < jobs; ++j) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<MachineId>(order));
    Job job;
    job.id = j + 1;
    for (MachineId m : order) job.routing.push_back({m, rng.uniform_int(duration_lo, duration_hi)});
    instance.jobs.push_back(std::move(job));
  }
  return instance;
}

Instance apply_scenario(const Instance& instance, const Scenario& scenario) {
  Instance result = instance;
  for (const auto& [id, delta] : scenario.arrival_shifts) {
    if (id < 1 || id > instance.job_count()) throw Error(ErrorCode::UnknownJob, "arrival shift for unknown job " + std::to_string(id));
    auto& job = result.jobs[static_cast<std::size_t>(id - 1)];
    job.release = std::max<Time>(0, job.release + delta);
  }
  for (const auto& added : scenario.new_jobs) {
    Job job = added;
    job.id = result.job_count() + 1;
    for (const auto& op : job.routing) {
      if (op.machine < 0 || op.machine >= instance.machine_count) {
        throw Error(ErrorCode::UnknownMachine, "new job routed to machine " + std::to_string(op.machine));
      }
    }
    validate_routing(job, instance.machine_count);
    job.release = std::max<Time>(0, job.release);
    result.jobs.push_back(std::move(job));
  }
  for (const auto& b : scenario.breakdowns) {
    if (b.machine < 0 || b.machine >= instance.machine_count) throw Error(ErrorCode::UnknownMachine, "breakdown on machine " + std::to_string(b.machine));
    if (!(b.start < b.end) || b.start < 0) throw Error(ErrorCode::InvalidScenario, "breakdown window must satisfy 0 <= start < end");
    result.breakdowns.push_back(b);
  }
  return result;
}

std::vector<Scenario> generate_scenarios(std::uint64_t seed, const Instance& instance, int count,
                                         const ScenarioGenerator& params) {
  if (count < 0) throw Error(ErrorCode::InvalidSize, "scenario count must be non-negative");
  validate(instance);
  Rng rng(derive_seed(seed, {0x5ce7}));
  const Time mean = mean_duration(instance);
  const Time horizon = makespan_lower_bound(instance);
  Time shortest = mean;
  Time longest = mean;
  for (const auto& job : instance.jobs) {
    for (const auto& op : job.routing) {
      shortest = std::min(shortest, op.duration);
      longest = std::max(longest, op.duration);
    }
  }

  std::vector<Scenario> scenarios;
  for (int s = 0; s < count; ++s) {
    Scenario scenario;
    for (const auto& job : instance.jobs) {
      if (rng.bernoulli(params.shift_probability)) {
        scenario.arrival_shifts[job.id] = rng.uniform_int(-2 * mean, 2 * mean);
      }
    }
    if (rng.bernoulli(params.breakdown_probability)) {
      Breakdown b;
      b.machine = static_cast<MachineId>(rng.index(static_cast<std::size_t>(instance.machine_count)));
      b.start = rng.uniform_int(0, horizon - 1);
      b.end = b.start + rng.uniform_int(std::max<Time>(1, mean / 2), 2 * mean);
      scenario.breakdowns.push_back(b);
    }
    if (rng.bernoulli(params.new_job_probability)) {
      std::vector<MachineId> order(static_cast<std::size_t>(instance.machine_count));
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(std::span<MachineId>(order));
      Job job;
      for (MachineId m : order) job.routing.push_back({m, rng.uniform_int(shortest, longest)});
      job.release = rng.uniform_int(0, horizon / 2);
      scenario.new_jobs.push_back(std::move(job));
    }
    scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

Schedule decode(const Instance& instance, const MachineSequences& sequences) {
  validate(instance);
  const auto machines = static_cast<std::size_t>(instance.machine_count);
  if (sequences.size() != machines) {
    throw Error(ErrorCode::BadPermutation, "expected " + std::to_string(machines) + " machine sequences");
  }
  for (std::size_t m = 0; m < machines; ++m) {
    auto expected = instance.jobs_on(static_cast<MachineId>(m));
    auto given = sequences[m];
    std::sort(given.begin(), given.end());
    if (given != expected) {
      throw Error(ErrorCode::BadPermutation, "sequence for machine " + std::to_string(m) + " is not a permutation of its jobs");
    }
  }

  std::vector<std::vector<Breakdown>> windows(machines);
  for (const auto& b : instance.breakdowns) windows[static_cast<std::size_t>(b.machine)].push_back(b);
  for (auto& w : windows) std::sort(w.begin(), w.end(), [](const Breakdown& a, const Breakdown& b) { return a.start < b.start; });

  const auto job_count = static_cast<std::size_t>(instance.job_count());
  MachineSequences order = sequences;
  std::vector<std::size_t> head(machines, 0);
  std::vector<std::size_t> next_op(job_count, 0);
  std::vector<Time> job_ready(job_count, 0);
  std::vector<Time> machine_ready(machines, 0);
  std::vector<std::vector<Time>> starts(job_count);
  std::size_t remaining = 0;
  for (std::size_t j = 0; j < job_count; ++j) {
    job_ready[j] = instance.jobs[j].release;
    starts[j].assign(instance.jobs[j].routing.size(), 0);
    remaining += instance.jobs[j].routing.size();
  }

  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t m = 0; m < machines; ++m) {
      while (head[m] < order[m].size()) {
        const auto j = static_cast<std::size_t>(order[m][head[m]] - 1);
        const auto& routing = instance.jobs[j].routing;
        const std::size_t k = next_op[j];
        if (k >= routing.size() || routing[k].machine != static_cast<MachineId>(m)) break;
        const Time start = earliest_fit(std::max(job_ready[j], machine_ready[m]), routing[k].duration, windows[m]);
        starts[j][k] = start;
        job_ready[j] = machine_ready[m] = start + routing[k].duration;
        ++next_op[j];
        ++head[m];
        --remaining;
        progressed = true;
      }
    }
    if (progressed || remaining == 0) continue;

    // Circular wait: promote the job-ready operation closest to the head of
    // its machine's remaining order (ties to the lower machine index).
    std::size_t best_machine = machines;
    std::size_t best_pos = 0;
    std::size_t best_distance = SIZE_MAX;
    for (std::size_t j = 0; j < job_count; ++j) {
      const auto& routing = instance.jobs[j].routing;
      if (next_op[j] >= routing.size()) continue;
      const auto m = static_cast<std::size_t>(routing[next_op[j]].machine);
      const auto it = std::find(order[m].begin() + static_cast<std::ptrdiff_t>(head[m]), order[m].end(), static_cast<JobId>(j + 1));
      const auto pos = static_cast<std::size_t>(it - order[m].begin());
      const std::size_t distance = pos - head[m];
      if (distance < best_distance || (distance == best_distance && m < best_machine)) {
        best_distance = distance;
        best_machine = m;
        best_pos = pos;
      }
    }
    auto& seq = order[best_machine];
    std::rotate(seq.begin() + static_cast<std::ptrdiff_t>(head[best_machine]), seq.begin() + static_cast<std::ptrdiff_t>(best_pos),
                seq.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
  }

  return Schedule(instance, std::move(order), std::move(starts));
}

Time makespan(const Schedule& schedule) {
  Time result = 0;
  for (const auto& job : schedule.instance().jobs) {
    for (std::size_t k = 0; k < job.routing.size(); ++k) result = std::max(result, schedule.end(job.id, k));
  }
  return result;
}

std::optional<std::string> find_violation(const Schedule& schedule) {
  const Instance& instance = schedule.instance();
  const auto& sequences = schedule.machine_sequences();
  if (sequences.size() != static_cast<std::size_t>(instance.machine_count)) return "wrong number of machine sequences";
  if (schedule.starts().size() != instance.jobs.size()) return "wrong number of start-time rows";

  std::vector<std::vector<int>> position_on(instance.jobs.size(), std::vector<int>(static_cast<std::size_t>(instance.machine_count), -1));
  for (const auto& job : instance.jobs) {
    const auto& row = schedule.starts()[static_cast<std::size_t>(job.id - 1)];
    if (row.size() != job.routing.size()) return "job " + std::to_string(job.id) + " has a wrong number of start times";
    for (std::size_t k = 0; k < job.routing.size(); ++k) {
      position_on[static_cast<std::size_t>(job.id - 1)][static_cast<std::size_t>(job.routing[k].machine)] = static_cast<int>(k);
      if (row[k] < job.release) return "job " + std::to_string(job.id) + " starts before its release";
      if (k > 0 && row[k] < schedule.end(job.id, k - 1)) return "job " + std::to_string(job.id) + " violates routing order";
    }
  }

  for (std::size_t m = 0; m < sequences.size(); ++m) {
    auto sorted = sequences[m];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != instance.jobs_on(static_cast<MachineId>(m))) return "machine " + std::to_string(m) + " sequence is not a permutation";
    for (std::size_t i = 0; i < sequences[m].size(); ++i) {
      const JobId j = sequences[m][i];
      const auto k = static_cast<std::size_t>(position_on[static_cast<std::size_t>(j - 1)][m]);
      const Time s = schedule.start(j, k);
      const Time e = schedule.end(j, k);
      if (i + 1 < sequences[m].size()) {
        const JobId next = sequences[m][i + 1];
        const auto kn = static_cast<std::size_t>(position_on[static_cast<std::size_t>(next - 1)][m]);
        if (schedule.start(next, kn) < e) return "overlap or order mismatch on machine " + std::to_string(m);
      }
      for (const auto& b : instance.breakdowns) {
        if (b.machine == static_cast<MachineId>(m) && s < b.end && b.start < e) {
          return "job " + std::to_string(j) + " overlaps a breakdown on machine " + std::to_string(m);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace aisched
