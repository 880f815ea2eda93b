#pragma once

// Worked counterexample: six elements with values 1..6 (Manhattan), G=3,
// a=2, b=3. Bounding only the per-element degree to [a-1, b-1] admits
// partitions with the wrong number of groups; the leader rows rule them out.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdgp/core.hpp"
#include "mdgp/model.hpp"
#include "mdgp/partitions.hpp"
#include "mdgp/solver.hpp"

namespace mdgp {

inline Instance counterexample_instance() {
  AttributeTable table({AttributeKind::numeric}, {{1.0}, {2.0}, {3.0}, {4.0}, {5.0}, {6.0}});
  return Instance(distance_matrix(table, Metric::manhattan), 3, 2, 3);
}

struct DegreeOnlyOptimum {
  Grouping grouping;
  std::vector<std::string> violated;  // unequal-model rows its encoding breaks
};

struct Demonstration {
  double correct_value = 0.0;  // optimum of the unequal-size model
  Grouping correct_grouping;
  double bnb_value = 0.0;
  double degree_only_value = 0.0;  // best partition accepted by the degree-only model
  std::vector<DegreeOnlyOptimum> degree_only_optima;  // lexicographic order

  // Rows violated by every degree-only optimum; empty if none exists.
  std::vector<std::string> violated() const {
    if (degree_only_optima.empty()) return {};
    auto common = degree_only_optima.front().violated;
    for (const auto& o : degree_only_optima) {
      std::erase_if(common, [&](const std::string& row) {
        return std::find(o.violated.begin(), o.violated.end(), row) == o.violated.end();
      });
    }
    return common;
  }
};

// Searches all set partitions (any group count) for those whose encoding
// satisfies the degree-only model with the best objective, then checks each
// against the unequal-size model.
inline Demonstration demonstrate(const Instance& instance) {
  Demonstration out;
  const auto exact = solve_bruteforce(instance);
  out.correct_value = exact.value;
  out.correct_grouping = exact.grouping;
  out.bnb_value = solve_bnb(instance).value;

  const auto relaxed = build_degree_only(instance);
  bool found = false;
  std::vector<Grouping> best;
  for_each_partition(instance.size(), [&](std::span<const int> labels, int) {
    Grouping g(std::vector<int>(labels.begin(), labels.end()));
    const auto check = check_assignment(relaxed, encode_grouping(g, ModelVariant::degree_only));
    if (!check.ok()) return;
    if (!found || check.objective > out.degree_only_value) {
      found = true;
      out.degree_only_value = check.objective;
      best.clear();
    }
    if (check.objective == out.degree_only_value) best.push_back(std::move(g));
  });

  const auto strict = build_unequal(instance);
  for (auto& g : best) {
    auto violated = check_assignment(strict, encode_grouping(g, ModelVariant::unequal)).violated;
    out.degree_only_optima.push_back({std::move(g), std::move(violated)});
  }
  return out;
}

inline std::string groups_text(const Grouping& g) {
  std::string s;
  for (const auto& members : canonicalize(g).groups()) {
    if (!s.empty()) s += ' ';
    s += '{';
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(members[k] + 1);
    }
    s += '}';
  }
  return s;
}

inline std::string to_text(const Demonstration& d) {
  auto join = [](const std::vector<std::string>& rows) {
    std::string s;
    for (const auto& r : rows) s += (s.empty() ? "" : ",") + r;
    return s.empty() ? std::string("none") : s;
  };
  std::ostringstream os;
  os << "correct: " << d.correct_value << ", degree-only: " << d.degree_only_value
     << ", violated: " << join(d.violated()) << "\n";
  os << "  unequal-size optimum " << d.correct_value << " via " << groups_text(d.correct_grouping)
     << " (branch-and-bound agrees: " << d.bnb_value << ")\n";
  os << "  degree-only optima (" << d.degree_only_optima.size() << "), each checked against the unequal-size model:\n";
  for (const auto& o : d.degree_only_optima) {
    os << "    " << groups_text(o.grouping) << "  " << o.grouping.group_count()
       << " groups, violates: " << join(o.violated) << "\n";
  }
  return os.str();
}

inline nlohmann::ordered_json to_json(const Demonstration& d) {
  auto groups = [](const Grouping& g) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& members : canonicalize(g).groups()) {
      nlohmann::ordered_json m = nlohmann::ordered_json::array();
      for (int e : members) m.push_back(e + 1);
      arr.push_back(std::move(m));
    }
    return arr;
  };
  nlohmann::ordered_json optima = nlohmann::ordered_json::array();
  for (const auto& o : d.degree_only_optima) {
    optima.push_back({{"groups", groups(o.grouping)}, {"violated", o.violated}});
  }
  nlohmann::ordered_json j;
  j["correct"] = {{"value", d.correct_value}, {"groups", groups(d.correct_grouping)}, {"bnb_value", d.bnb_value}};
  j["degree_only"] = {{"value", d.degree_only_value}, {"optima", std::move(optima)}};
  j["violated"] = d.violated();
  return j;
}

}  // namespace mdgp
