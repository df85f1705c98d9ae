#include <json.hpp>

#include "aisched/error.hpp"
#include "aisched/jssp.hpp"

namespace aisched {

namespace {

using nlohmann::json;

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidScenario, "scenario must be a JSON object");
  Scenario scenario;
  if (auto it = j.find("arrival_shifts"); it != j.end()) {
    for (const auto& [key, value] : it->items()) {
      std::size_t consumed = 0;
      const int id = std::stoi(key, &consumed);
      if (consumed != key.size()) throw Error(ErrorCode::InvalidScenario, "arrival shift key is not a job id: " + key);
      scenario.arrival_shifts[id] = value.get<Time>();
    }
  }
  if (auto it = j.find("new_jobs"); it != j.end()) {
    for (const auto& record : *it) {
      Job job;
      for (const auto& op : record.at("routing")) {
        // accept {"machine": m, "duration": d} or [m, d]
        if (op.is_array()) {
          job.routing.push_back({op.at(0).get<MachineId>(), op.at(1).get<Time>()});
        } else {
          job.routing.push_back({op.at("machine").get<MachineId>(), op.at("duration").get<Time>()});
        }
      }
      job.release = record.value("release", Time{0});
      scenario.new_jobs.push_back(std::move(job));
    }
  }
  if (auto it = j.find("breakdowns"); it != j.end()) {
    for (const auto& record : *it) {
      Breakdown b{record.at("machine").get<MachineId>(), record.at("start").get<Time>(), record.at("end").get<Time>()};
      if (!(b.start < b.end)) throw Error(ErrorCode::InvalidScenario, "breakdown window must satisfy start < end");
      scenario.breakdowns.push_back(b);
    }
  }
  return scenario;
}

json scenario_to_json(const Scenario& scenario) {
  json shifts = json::object();
  for (const auto& [id, delta] : scenario.arrival_shifts) shifts[std::to_string(id)] = delta;
  json jobs = json::array();
  for (const auto& job : scenario.new_jobs) {
    json routing = json::array();
    for (const auto& op : job.routing) routing.push_back({{"machine", op.machine}, {"duration", op.duration}});
    jobs.push_back({{"routing", routing}, {"release", job.release}});
  }
  json breakdowns = json::array();
  for (const auto& b : scenario.breakdowns) breakdowns.push_back({{"machine", b.machine}, {"start", b.start}, {"end", b.end}});
  return {{"arrival_shifts", shifts}, {"new_jobs", jobs}, {"breakdowns", breakdowns}};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidScenario, e.what());
  }
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  try {
    return scenario_from_json(parse_json(json_text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidScenario, e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::InvalidScenario, e.what());
  }
}

std::vector<Scenario> parse_scenario_suite(std::string_view json_text) {
  const json root = parse_json(json_text);
  std::vector<Scenario> suite;
  try {
    if (root.is_array()) {
      for (const auto& item : root) suite.push_back(scenario_from_json(item));
    } else {
      suite.push_back(scenario_from_json(root));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidScenario, e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::InvalidScenario, e.what());
  }
  return suite;
}

std::string format_scenario_suite(std::span<const Scenario> scenarios) {
  json root = json::array();
  for (const auto& s : scenarios) root.push_back(scenario_to_json(s));
  return root.dump(2) + "\n";
}

}  // namespace aisched
