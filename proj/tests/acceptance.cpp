// Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mdgp/mdgp.hpp"
#include "test_support.hpp"

using namespace mdgp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> run;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

const auto kOptimum = Grouping::from_one_based({{1, 5}, {2, 4}, {3, 6}});
const auto kTwoGroups = Grouping::from_one_based({{1, 3, 6}, {2, 4, 5}});

std::vector<Instance> random_suite() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> pick_n(5, 9), pick_g(2, 3);
  std::vector<Instance> out;
  for (int s = 0; s < 120; ++s) {
    const int n = pick_n(rng), g = pick_g(rng);
    std::vector<std::pair<int, int>> bounds;
    for (int a = 1; a <= n; ++a) {
      for (int b = a; b <= n; ++b) {
        if (g * a <= n && n <= g * b) bounds.emplace_back(a, b);
      }
    }
    const auto [a, b] = bounds[std::uniform_int_distribution<std::size_t>(0, bounds.size() - 1)(rng)];
    out.push_back(testing::random_instance(n, g, a, b, rng()));
  }
  return out;
}

Outcome worked_example() {
  Outcome o;
  const auto inst = counterexample_instance();
  const auto brute = solve_bruteforce(inst);
  const auto bnb = solve_bnb(inst);
  if (brute.value != 9.0) fail(o, "bruteforce value " + std::to_string(brute.value));
  if (bnb.value != 9.0) fail(o, "bnb value " + std::to_string(bnb.value));
  if (objective_value(kOptimum, inst.distances()) != 9.0) fail(o, "{1,5},{2,4},{3,6} does not attain 9");
  if (!validate_grouping(kOptimum, inst).feasible) fail(o, "{1,5},{2,4},{3,6} infeasible");
  if (o.pass) o.detail = "bruteforce 9, bnb 9, " + groups_text(bnb.grouping);
  return o;
}

Outcome defective_formulation() {
  Outcome o;
  const auto inst = counterexample_instance();
  const auto demo = demonstrate(inst);
  if (demo.degree_only_value != 16.0) fail(o, "degree-only optimum " + std::to_string(demo.degree_only_value));
  if (demo.correct_value != 9.0) fail(o, "correct optimum " + std::to_string(demo.correct_value));
  bool witnessed = false;
  for (const auto& opt : demo.degree_only_optima) witnessed = witnessed || opt.grouping == kTwoGroups;
  if (!witnessed) fail(o, "{1,3,6},{2,4,5} is not among the degree-only optima");
  const auto relaxed = check_assignment(build_degree_only(inst), encode_grouping(kTwoGroups, ModelVariant::degree_only));
  if (!relaxed.ok() || relaxed.objective != 16.0) fail(o, "{1,3,6},{2,4,5} not a degree-only solution of value 16");
  const auto strict = check_assignment(build_unequal(inst), encode_grouping(kTwoGroups, ModelVariant::unequal));
  if (strict.violated != std::vector<std::string>{"lcount"}) fail(o, "violated rows differ from {lcount}");
  if (o.pass) o.detail = "degree-only 16 via {1,3,6},{2,4,5}, violates exactly lcount";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto suite = random_suite();
  for (std::size_t s = 0; s < suite.size(); ++s) {
    const auto bnb = solve_bnb(suite[s]);
    const auto brute = solve_bruteforce(suite[s]);
    if (!bnb.proven || std::abs(bnb.value - brute.value) > 1e-9) {
      fail(o, "instance " + std::to_string(s) + ": bnb " + std::to_string(bnb.value) + " vs " +
                  std::to_string(brute.value));
    }
  }
  if (o.pass) o.detail = std::to_string(suite.size()) + " instances agree";
  return o;
}

Outcome soundness_completeness() {
  Outcome o;
  std::size_t checks = 0;
  try {
    for (int n = 6; n <= 8; ++n) {
      const auto groupings = testing::all_groupings(n);
      for (const auto& [g, a, b] : testing::feasible_shapes(n)) {
        const Instance inst(DistanceMatrix(n), g, a, b);
        const auto model = build_unequal(inst);
        for (const auto& grouping : groupings) {
          const bool accepted = check_assignment(model, encode_grouping(grouping, ModelVariant::unequal)).ok();
          if (accepted != validate_grouping(grouping, inst).feasible) {
            fail(o, "N=" + std::to_string(n) + " G=" + std::to_string(g) + " a=" + std::to_string(a) +
                        " b=" + std::to_string(b) + ": " + groups_text(grouping));
          }
          ++checks;
        }
      }
    }
  } catch (const std::exception& e) {
    fail(o, std::string("exception: ") + e.what());
  }
  if (o.pass) o.detail = std::to_string(checks) + " (partition, shape) pairs";
  return o;
}

Outcome decode_round_trip() {
  Outcome o;
  std::size_t checks = 0;
  try {
    for (int n = 1; n <= 8; ++n) {
      for (const auto& g : testing::all_groupings(n)) {
        for (auto variant : {ModelVariant::unequal, ModelVariant::degree_only}) {
          if (!(decode_partition(encode_grouping(g, variant)) == canonicalize(g))) fail(o, groups_text(g));
          ++checks;
        }
      }
    }
  } catch (const std::exception& e) {
    fail(o, std::string("exception: ") + e.what());
  }
  if (o.pass) o.detail = std::to_string(checks) + " round trips";
  return o;
}

Outcome equal_size_consistency() {
  Outcome o;
  const std::vector<std::pair<int, int>> cases{{4, 2}, {4, 4}, {6, 2}, {6, 3}, {8, 2}, {8, 4}};
  for (const auto& [n, g] : cases) {
    const int s = n / g;
    const Instance inst(testing::random_distances(n, static_cast<std::uint64_t>(n * 10 + g)), g, s, s);
    const auto eq = build_equal(inst);
    const auto uneq = build_unequal(inst);
    for (const auto& grouping : testing::all_groupings(n)) {
      const bool a = check_assignment(eq, encode_grouping(grouping, ModelVariant::equal)).ok();
      const bool b = check_assignment(uneq, encode_grouping(grouping, ModelVariant::unequal)).ok();
      if (a != b) fail(o, "N=" + std::to_string(n) + " G=" + std::to_string(g) + ": " + groups_text(grouping));
    }
    const auto brute = solve_bruteforce(inst);
    const auto bnb = solve_bnb(inst);
    if (std::abs(brute.value - bnb.value) > 1e-9) fail(o, "solvers disagree at N=" + std::to_string(n));
    if (!check_assignment(eq, encode_grouping(bnb.grouping, ModelVariant::equal)).ok()) {
      fail(o, "optimum rejected by equal model at N=" + std::to_string(n));
    }
  }
  if (o.pass) o.detail = std::to_string(cases.size()) + " (N, G) cases";
  return o;
}

std::size_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Outcome model_sizes() {
  Outcome o;
  for (std::size_t n = 3; n <= 10; ++n) {
    const auto pairs = choose(n, 2), tri = 3 * choose(n, 3);
    const Instance inst(DistanceMatrix(static_cast<int>(n)), 1, 1, static_cast<int>(n));
    struct Expect {
      ModelVariant variant;
      std::size_t vars, rows;
    };
    for (const auto& e : {Expect{ModelVariant::equal, pairs, tri + n},
                          Expect{ModelVariant::degree_only, pairs, tri + 2 * n},
                          Expect{ModelVariant::unequal, pairs + n - 1, tri + 2 * n + pairs + (n - 1) + 1}}) {
      const auto m = build_model(inst, e.variant);
      if (m.variables().size() != e.vars || m.constraints().size() != e.rows) {
        fail(o, std::string(to_string(e.variant)) + " N=" + std::to_string(n));
      }
    }
  }
  if (o.pass) o.detail = "N=3..10, three variants";
  return o;
}

// Largest gain over feasible completions, by independent enumeration.
double best_completion(const Instance& inst, std::vector<int> labels, std::vector<int> sizes) {
  const int n = inst.size();
  const auto& d = inst.distances();
  double best = -std::numeric_limits<double>::infinity();
  const auto k = static_cast<int>(labels.size());
  labels.resize(static_cast<std::size_t>(n), -1);
  auto rec = [&](auto& self, int i, double gain) -> void {
    if (i == n) {
      if (static_cast<int>(sizes.size()) != inst.groups()) return;
      for (int s : sizes) {
        if (s < inst.min_size()) return;
      }
      best = std::max(best, gain);
      return;
    }
    const int opened = static_cast<int>(sizes.size());
    for (int g = 0; g <= opened && g < inst.groups(); ++g) {
      if (g == opened) sizes.push_back(0);
      if (sizes[static_cast<std::size_t>(g)] < inst.max_size()) {
        double add = 0.0;
        for (int v = 0; v < i; ++v) {
          if (labels[static_cast<std::size_t>(v)] == g) add += d(i, v);
        }
        ++sizes[static_cast<std::size_t>(g)];
        labels[static_cast<std::size_t>(i)] = g;
        self(self, i + 1, gain + add);
        labels[static_cast<std::size_t>(i)] = -1;
        --sizes[static_cast<std::size_t>(g)];
      }
      if (g == opened) sizes.pop_back();
    }
  };
  rec(rec, k, 0.0);
  return best;
}

Outcome bound_admissibility() {
  Outcome o;
  std::size_t nodes = 0, instances = 0;
  for (int n = 1; n <= 7; ++n) {
    int s = 0;
    for (const auto& [g, a, b] : testing::feasible_shapes(n)) {
      for (const double lo : {0.0, -40.0}) {
        const Instance inst(testing::random_distances(n, static_cast<std::uint64_t>(7919 * n + ++s), lo, 100.0), g,
                            a, b);
        SolveOptions opts;
        opts.warm_start_restarts = 0;  // explore more of the tree
        auto observer = [&](const PartialAssignment& state, double value, double bound) {
          ++nodes;
          const double best = best_completion(inst, state.labels, state.group_sizes);
          if (value + bound < value + best - 1e-9) {
            fail(o, "N=" + std::to_string(n) + " depth " + std::to_string(state.labels.size()) + ": bound " +
                        std::to_string(bound) + " < " + std::to_string(best));
          }
        };
        (void)solve_bnb(inst, opts, observer);
        ++instances;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(nodes) + " nodes over " + std::to_string(instances) + " instances";
  return o;
}

Outcome heuristic_bounding() {
  Outcome o;
  const auto suite = random_suite();
  double gap_sum = 0.0;
  for (std::size_t s = 0; s < suite.size(); ++s) {
    const double opt = solve_bruteforce(suite[s]).value;
    const auto h = multistart(suite[s], 20, s);
    if (h.value > opt + 1e-9) fail(o, "instance " + std::to_string(s) + " exceeds the optimum");
    if (!validate_grouping(h.grouping, suite[s]).feasible) fail(o, "instance " + std::to_string(s) + " infeasible");
    gap_sum += opt - h.value;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "mean gap %.6g over %zu instances (restarts=20)", gap_sum / double(suite.size()),
                suite.size());
  if (o.pass) o.detail = buf;
  return o;
}

Outcome gower_properties() {
  Outcome o;
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<int> rows(2, 15), cols(1, 6), coin(0, 1), label(0, 2);
  std::uniform_real_distribution<double> val(-1e3, 1e3);
  for (int t = 0; t < 50; ++t) {
    const int n = rows(rng), k = cols(rng);
    std::vector<AttributeKind> schema;
    for (int c = 0; c < k; ++c) schema.push_back(c == 0 || coin(rng) ? AttributeKind::numeric : AttributeKind::categorical);
    if (k > 1) schema[1] = AttributeKind::categorical;
    std::vector<std::vector<AttributeValue>> data;
    for (int i = 0; i < n; ++i) {
      std::vector<AttributeValue> row;
      for (auto kind : schema) {
        if (kind == AttributeKind::numeric) {
          row.emplace_back(val(rng));
        } else {
          row.emplace_back(std::string(1, static_cast<char>('a' + label(rng))));
        }
      }
      data.push_back(std::move(row));
    }
    data[1] = data[0];
    const AttributeTable table(schema, data);
    const auto d = distance_matrix(table, Metric::gower);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = d(i, j);
        if (v < -1e-12 || v > 1.0 + 1e-12) fail(o, "table " + std::to_string(t) + ": out of [0,1]");
        if (std::abs(v - d(j, i)) > 1e-12) fail(o, "table " + std::to_string(t) + ": asymmetric");
        if (table.row(i) == table.row(j) && std::abs(v) > 1e-12) {
          fail(o, "table " + std::to_string(t) + ": identical rows at distance " + std::to_string(v));
        }
      }
    }
  }
  if (o.pass) o.detail = "50 mixed tables";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "worked example optimum", 1.0, worked_example},
      {2, "degree-only relaxation", 1.0, defective_formulation},
      {3, "bnb equals brute force", 60.0, oracle_equivalence},
      {4, "ilp soundness and completeness", 60.0, soundness_completeness},
      {5, "decode round trip", 0.0, decode_round_trip},
      {6, "equal-size consistency", 0.0, equal_size_consistency},
      {7, "model size formulas", 0.0, model_sizes},
      {8, "bound admissibility", 0.0, bound_admissibility},
      {9, "heuristic bounding", 0.0, heuristic_bounding},
      {10, "gower properties", 0.0, gower_properties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      fail(o, "took " + std::to_string(secs) + " s, limit " + std::to_string(c.time_limit_s) + " s");
    }
    failures += !o.pass;
    std::printf("[%s] criterion %d: %s (%.3f s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
