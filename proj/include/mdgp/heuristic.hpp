#pragma once

// Baseline heuristic: capacity-aware greedy construction followed by
// steepest-ascent local search over move and swap neighborhoods, restarted
// from independently seeded constructions.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mdgp/core.hpp"
#include "mdgp/rng.hpp"

namespace mdgp {

struct HeuristicResult {
  Grouping grouping;
  double value = 0.0;
  int restarts_used = 0;
  int best_restart_index = 0;  // 0-based
};

inline Grouping greedy_construct(const Instance& instance, std::uint64_t seed) {
  const int n = instance.size();
  const int groups = instance.groups();
  const int a = instance.min_size();
  const int b = instance.max_size();
  const auto& dist = instance.distances();

  SplitMix64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(k)]);
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(groups));
  for (int g = 0; g < groups; ++g) {
    const int e = order[static_cast<std::size_t>(g)];
    labels[static_cast<std::size_t>(e)] = g;
    members[static_cast<std::size_t>(g)].push_back(e);
  }

  int deficit = groups * (a - 1);
  for (int pos = groups; pos < n; ++pos) {
    const int e = order[static_cast<std::size_t>(pos)];
    const int remaining_after = n - pos - 1;
    int best = -1;
    double best_gain = 0.0;
    for (int g = 0; g < groups; ++g) {
      const auto& m = members[static_cast<std::size_t>(g)];
      const int size = static_cast<int>(m.size());
      if (size >= b) continue;
      const int new_deficit = size < a ? deficit - 1 : deficit;
      if (new_deficit > remaining_after) continue;
      double gain = 0.0;
      for (int v : m) gain += dist.at_unchecked(e, v);
      if (best < 0 || gain > best_gain) {
        best = g;
        best_gain = gain;
      }
    }
    // Reachable only if the instance invariants were bypassed.
    if (best < 0) throw ContractViolation("greedy construction found no feasible group");
    if (static_cast<int>(members[static_cast<std::size_t>(best)].size()) < a) --deficit;
    labels[static_cast<std::size_t>(e)] = best;
    members[static_cast<std::size_t>(best)].push_back(e);
  }
  return canonicalize(Grouping(std::move(labels)));
}

// Steepest ascent until no move or swap improves the objective. Among equally
// good moves the lexicographically smallest descriptor wins: relocations
// (element, target group) come before swaps (i, j), each in ascending order.
inline Grouping local_search(const Instance& instance, const Grouping& start) {
  if (!validate_grouping(start, instance).feasible) {
    throw ContractViolation("local search needs a feasible start");
  }
  const int n = instance.size();
  const int groups = instance.groups();
  const int a = instance.min_size();
  const int b = instance.max_size();
  const auto& dist = instance.distances();

  std::vector<int> labels(start.labels().begin(), start.labels().end());
  std::vector<int> sizes = start.group_sizes();

  // gain[i][g] = sum of d(i, v) over members v != i of group g
  std::vector<double> gain(static_cast<std::size_t>(n) * static_cast<std::size_t>(groups), 0.0);
  auto at = [&](int i, int g) -> double& {
    return gain[static_cast<std::size_t>(i) * static_cast<std::size_t>(groups) + static_cast<std::size_t>(g)];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) at(i, labels[static_cast<std::size_t>(j)]) += dist.at_unchecked(i, j);
    }
  }

  double scale = 0.0;
  for (double v : dist.upper()) scale = std::max(scale, std::abs(v));
  const double tolerance = 1e-12 * (1.0 + scale);

  auto relocate = [&](int e, int to) {
    const int from = labels[static_cast<std::size_t>(e)];
    for (int v = 0; v < n; ++v) {
      if (v == e) continue;
      const double d = dist.at_unchecked(e, v);
      at(v, from) -= d;
      at(v, to) += d;
    }
    labels[static_cast<std::size_t>(e)] = to;
    --sizes[static_cast<std::size_t>(from)];
    ++sizes[static_cast<std::size_t>(to)];
  };

  for (;;) {
    double best_delta = tolerance;
    int kind = -1, p = -1, q = -1;

    for (int e = 0; e < n; ++e) {
      const int from = labels[static_cast<std::size_t>(e)];
      if (sizes[static_cast<std::size_t>(from)] - 1 < a) continue;
      for (int to = 0; to < groups; ++to) {
        if (to == from || sizes[static_cast<std::size_t>(to)] + 1 > b) continue;
        const double delta = at(e, to) - at(e, from);
        if (delta > best_delta) {
          best_delta = delta;
          kind = 0, p = e, q = to;
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      const int gi = labels[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) {
        const int gj = labels[static_cast<std::size_t>(j)];
        if (gi == gj) continue;
        const double dij = dist.at_unchecked(i, j);
        const double delta = (at(i, gj) - dij - at(i, gi)) + (at(j, gi) - dij - at(j, gj));
        if (delta > best_delta) {
          best_delta = delta;
          kind = 1, p = i, q = j;
        }
      }
    }

    if (kind < 0) break;
    if (kind == 0) {
      relocate(p, q);
    } else {
      const int gp = labels[static_cast<std::size_t>(p)];
      const int gq = labels[static_cast<std::size_t>(q)];
      relocate(p, gq);
      relocate(q, gp);
    }
  }
  return canonicalize(Grouping(std::move(labels)));
}

inline HeuristicResult multistart(const Instance& instance, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw ContractViolation("multistart needs at least one restart");
  HeuristicResult best;
  for (int r = 0; r < restarts; ++r) {
    auto g = local_search(instance, greedy_construct(instance, derive_seed(seed, static_cast<std::uint64_t>(r))));
    const double value = objective_value(g, instance.distances());
    if (r == 0 || value > best.value) {
      best.grouping = std::move(g);
      best.value = value;
      best.best_restart_index = r;
    }
  }
  best.restarts_used = restarts;
  return best;
}

}  // namespace mdgp
