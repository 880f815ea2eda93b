#pragma once

// Run reports printed by the command-line tool, as text or JSON.
//
// JSON fields: instance{n,G,a,b}, solver, value, groups (1-based), proven,
// elapsed_ms, nodes, and gap when an exact optimum was available for
// comparison. Verification reports add feasible and violations.

#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdgp/core.hpp"

namespace mdgp {

struct RunReport {
  int n = 0;
  int groups = 0;
  int min_size = 0;
  int max_size = 0;
  std::string solver;
  double value = 0.0;
  Grouping grouping;
  bool proven = false;
  double elapsed_ms = 0.0;
  std::uint64_t nodes = 0;
  std::optional<double> gap;  // exact optimum minus value
  std::optional<bool> feasible;
  std::vector<std::string> violations;
};

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& members : canonicalize(r.grouping).groups()) {
    nlohmann::ordered_json g = nlohmann::ordered_json::array();
    for (int e : members) g.push_back(e + 1);
    groups.push_back(std::move(g));
  }
  nlohmann::ordered_json j = {
      {"instance", {{"n", r.n}, {"G", r.groups}, {"a", r.min_size}, {"b", r.max_size}}},
      {"solver", r.solver},
      {"value", r.value},
      {"groups", std::move(groups)},
      {"proven", r.proven},
      {"elapsed_ms", r.elapsed_ms},
      {"nodes", r.nodes},
  };
  if (r.gap) j["gap"] = *r.gap;
  if (r.feasible) {
    j["feasible"] = *r.feasible;
    j["violations"] = r.violations;
  }
  return j;
}

// Strict inverse of to_json: rejects unknown or missing fields.
inline RunReport report_from_json(const nlohmann::ordered_json& j) {
  auto fail = [](const std::string& why) { throw Error("invalid run report: " + why); };
  if (!j.is_object()) fail("not an object");

  static const std::set<std::string> required = {"instance", "solver", "value", "groups",
                                                 "proven",   "elapsed_ms", "nodes"};
  static const std::set<std::string> optional = {"gap", "feasible", "violations"};
  for (const auto& key : required) {
    if (!j.contains(key)) fail("missing field '" + key + "'");
  }
  for (const auto& [key, _] : j.items()) {
    if (!required.count(key) && !optional.count(key)) fail("unexpected field '" + key + "'");
  }
  if (j.contains("feasible") != j.contains("violations")) fail("feasible and violations come together");

  const auto& inst = j.at("instance");
  if (!inst.is_object() || inst.size() != 4) fail("instance must hold exactly n, G, a, b");

  RunReport r;
  try {
    r.n = inst.at("n").get<int>();
    r.groups = inst.at("G").get<int>();
    r.min_size = inst.at("a").get<int>();
    r.max_size = inst.at("b").get<int>();
    r.solver = j.at("solver").get<std::string>();
    r.value = j.at("value").get<double>();
    r.proven = j.at("proven").get<bool>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    r.nodes = j.at("nodes").get<std::uint64_t>();
    if (j.contains("gap")) r.gap = j.at("gap").get<double>();
    if (j.contains("feasible")) {
      r.feasible = j.at("feasible").get<bool>();
      r.violations = j.at("violations").get<std::vector<std::string>>();
    }
    std::vector<std::vector<int>> groups;
    for (const auto& g : j.at("groups")) {
      std::vector<int> members;
      for (const auto& e : g) members.push_back(e.get<int>() - 1);
      groups.push_back(std::move(members));
    }
    r.grouping = Grouping::from_groups(groups);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  } catch (const ContractViolation& e) {
    fail(e.what());
  }
  if (r.grouping.size() != r.n) fail("groups do not cover n elements");
  return r;
}

inline std::string to_text(const RunReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "instance: N=" << r.n << " G=" << r.groups << " a=" << r.min_size << " b=" << r.max_size << "\n";
  os << "solver: " << r.solver << "\n";
  if (r.feasible) {
    os << "feasible: " << (*r.feasible ? "yes" : "no") << "\n";
    for (const auto& v : r.violations) os << "  violation: " << v << "\n";
  }
  os << "value: " << r.value << "\n";
  if (!r.feasible) os << "proven: " << (r.proven ? "yes" : "no") << "\n";
  if (r.gap) os << "gap: " << *r.gap << "\n";
  os << "nodes: " << r.nodes << "\n";
  os.precision(3);
  os << std::fixed << "elapsed_ms: " << r.elapsed_ms << "\n";
  os << "groups:\n";
  for (const auto& members : canonicalize(r.grouping).groups()) {
    os << " ";
    for (int e : members) os << " " << e + 1;
    os << "\n";
  }
  return os.str();
}

}  // namespace mdgp
