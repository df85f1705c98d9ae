#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive so that they share no code paths with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "aisched/jssp.hpp"
#include "aisched/random.hpp"

namespace oracle {

using aisched::Instance;
using aisched::JobId;
using aisched::MachineSequences;
using aisched::Schedule;
using aisched::Time;

// Sum of 5 / 1 / 0 per symbol at every offset, keep the largest.
inline int match_score(const std::vector<int>& antibody, const std::vector<int>& antigen) {
  int best = 0;
  const int n = static_cast<int>(antigen.size());
  const int k = static_cast<int>(antibody.size());
  for (int off = 0; off + k <= n; ++off) {
    int s = 0;
    for (int i = 0; i < k; ++i) {
      if (antibody[i] == 0)
        s += 1;
      else if (antibody[i] == antigen[off + i])
        s += 5;
    }
    if (s > best) best = s;
  }
  return best;
}

inline std::optional<std::string> violation(const Schedule& schedule) {
  const Instance& inst = schedule.instance();
  const auto& seqs = schedule.machine_sequences();
  if (static_cast<int>(seqs.size()) != inst.machine_count) return "machine count";

  // (start, end, job) per machine
  std::vector<std::vector<std::tuple<Time, Time, JobId>>> busy(inst.machine_count);
  for (const auto& job : inst.jobs) {
    Time prev_end = job.release;
    for (std::size_t k = 0; k < job.routing.size(); ++k) {
      const Time s = schedule.start(job.id, k);
      const Time e = s + job.routing[k].duration;
      if (s < prev_end) return "job " + std::to_string(job.id) + " op " + std::to_string(k) + " starts early";
      prev_end = e;
      busy[job.routing[k].machine].emplace_back(s, e, job.id);
    }
  }
  for (int m = 0; m < inst.machine_count; ++m) {
    auto ops = busy[m];
    std::sort(ops.begin(), ops.end());
    for (std::size_t i = 1; i < ops.size(); ++i) {
      if (std::get<0>(ops[i]) < std::get<1>(ops[i - 1])) return "overlap on machine " + std::to_string(m);
    }
    std::vector<JobId> order;
    for (const auto& op : ops) order.push_back(std::get<2>(op));
    if (order != seqs[m]) return "start order disagrees with sequence on machine " + std::to_string(m);
    for (const auto& b : inst.breakdowns) {
      if (b.machine != m) continue;
      for (const auto& op : ops) {
        if (std::get<0>(op) < b.end && b.start < std::get<1>(op)) return "operation inside breakdown";
      }
    }
  }
  return std::nullopt;
}

// Earliest start for every operation given fixed machine orders: walk the
// precedence graph in topological order, taking the latest predecessor end
// and stepping past any breakdown it would overlap. Without breakdowns this
// is the longest path to each node. Returns nullopt if the orders are cyclic.
inline std::optional<Time> fixed_order_makespan(const Instance& inst, const MachineSequences& seqs) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> succ;
  std::map<std::pair<int, int>, int> indeg;
  std::map<std::pair<int, int>, Time> dur;
  std::map<std::pair<int, int>, int> mach;
  std::map<std::pair<int, int>, int> op_of;  // (job, machine) -> routing position
  for (const auto& job : inst.jobs) {
    for (std::size_t k = 0; k < job.routing.size(); ++k) {
      const std::pair<int, int> node{job.id, static_cast<int>(k)};
      indeg[node] += 0;
      dur[node] = job.routing[k].duration;
      mach[node] = job.routing[k].machine;
      op_of[{job.id, job.routing[k].machine}] = static_cast<int>(k);
      if (k > 0) {
        succ[{job.id, static_cast<int>(k) - 1}].push_back(node);
        indeg[node]++;
      }
    }
  }
  for (int m = 0; m < inst.machine_count; ++m) {
    for (std::size_t i = 1; i < seqs[m].size(); ++i) {
      const std::pair<int, int> a{seqs[m][i - 1], op_of.at({seqs[m][i - 1], m})};
      const std::pair<int, int> b{seqs[m][i], op_of.at({seqs[m][i], m})};
      succ[a].push_back(b);
      indeg[b]++;
    }
  }
  std::map<std::pair<int, int>, Time> ready;
  for (const auto& job : inst.jobs) ready[{job.id, 0}] = job.release;
  std::queue<std::pair<int, int>> q;
  for (const auto& [node, d] : indeg)
    if (d == 0) q.push(node);
  Time result = 0;
  std::size_t done = 0;
  while (!q.empty()) {
    auto node = q.front();
    q.pop();
    ++done;
    Time s = ready[node];
    for (bool moved = true; moved;) {
      moved = false;
      for (const auto& b : inst.breakdowns) {
        if (b.machine == mach[node] && s < b.end && b.start < s + dur[node]) {
          s = b.end;
          moved = true;
        }
      }
    }
    const Time e = s + dur[node];
    result = std::max(result, e);
    for (const auto& nx : succ[node]) {
      ready[nx] = std::max(ready[nx], e);
      if (--indeg[nx] == 0) q.push(nx);
    }
  }
  if (done != dur.size()) return std::nullopt;
  return result;
}

// Random instance with distinct machines per job and an arbitrary subset of
// machines visited.
inline Instance random_instance(aisched::Rng& rng, int max_jobs, int max_machines, bool with_breakdowns) {
  Instance inst;
  inst.machine_count = static_cast<int>(rng.uniform_int(1, max_machines));
  const int jobs = static_cast<int>(rng.uniform_int(1, max_jobs));
  for (int j = 1; j <= jobs; ++j) {
    std::vector<int> ms(inst.machine_count);
    for (int m = 0; m < inst.machine_count; ++m) ms[m] = m;
    rng.shuffle(std::span<int>(ms));
    const auto len = static_cast<std::size_t>(rng.uniform_int(1, inst.machine_count));
    aisched::Job job;
    job.id = j;
    job.release = rng.bernoulli(0.3) ? rng.uniform_int(0, 10) : 0;
    for (std::size_t k = 0; k < len; ++k) job.routing.push_back({ms[k], rng.uniform_int(1, 9)});
    inst.jobs.push_back(job);
  }
  if (with_breakdowns) {
    const auto count = rng.uniform_int(0, 2);
    for (int b = 0; b < count; ++b) {
      const auto m = static_cast<int>(rng.uniform_int(0, inst.machine_count - 1));
      const auto s = rng.uniform_int(0, 20);
      inst.breakdowns.push_back({m, s, s + rng.uniform_int(1, 8)});
    }
  }
  return inst;
}

inline MachineSequences random_sequences(aisched::Rng& rng, const Instance& inst) {
  MachineSequences seqs(inst.machine_count);
  for (int m = 0; m < inst.machine_count; ++m) {
    seqs[m] = inst.jobs_on(m);
    rng.shuffle(std::span<JobId>(seqs[m]));
  }
  return seqs;
}

}  // namespace oracle
