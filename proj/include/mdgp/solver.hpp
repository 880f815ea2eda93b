#pragma once

// Exact solvers.
//
// solve_bruteforce enumerates every feasible partition (restricted-growth
// strings with size pruning) and is the reference oracle for small N.
//
// solve_bnb is a depth-first branch-and-bound over element-to-group
// assignments in index order. Element k may join any open group with spare
// capacity or open the next unused label, which removes label symmetry.
// Nodes are cut when the remaining elements can no longer fill every group
// to `a` or fit into the capacity left under `b`, and when
//   value(prefix) + upper_bound(prefix) <= incumbent.
// A second, sequential pass then walks the tree in lexicographic label order
// with the proven optimum as target, so the reported grouping is the
// lexicographically smallest canonical optimum whatever the worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "mdgp/core.hpp"
#include "mdgp/heuristic.hpp"
#include "mdgp/partitions.hpp"

namespace mdgp {

inline constexpr int kBruteforceCap = 12;

struct SolveOptions {
  std::optional<std::uint64_t> node_limit;
  std::optional<std::chrono::milliseconds> time_limit;
  int workers = 1;
  int warm_start_restarts = 4;  // 0 disables the heuristic incumbent
  std::uint64_t warm_start_seed = 0;
  bool canonical_ties = true;
};

struct OptimalResult {
  double value = 0.0;
  Grouping grouping;
  std::uint64_t nodes_explored = 0;
  bool proven = false;
  std::chrono::nanoseconds elapsed{0};
};

// Elements 0..labels.size()-1 are assigned; group_sizes has one entry per
// opened group. Labels must follow the symmetry-breaking order.
struct PartialAssignment {
  std::vector<int> labels;
  std::vector<int> group_sizes;
};

namespace detail {

inline void check_bruteforce_cap(const Instance& instance, int max_n) {
  if (instance.size() > max_n) {
    throw SolverRefusal("N=" + std::to_string(instance.size()) + " exceeds the brute-force cap of " +
                        std::to_string(max_n) + "; use branch-and-bound");
  }
}

// Optimistic value of completing a prefix. Each unassigned element u gains
// at most b-1 partners: assigned elements in groups with spare capacity
// (weight d) or other unassigned elements (weight d/2, the other half is
// charged to the partner). u takes its best a-1 weights, then any further
// positive ones up to b-1.
inline double completion_bound(const Instance& instance, std::span<const int> labels, int assigned,
                               std::span<const int> group_sizes, std::vector<double>& scratch) {
  const int n = instance.size();
  const int a = instance.min_size();
  const int b = instance.max_size();
  const auto& dist = instance.distances();
  if (b <= 1) return 0.0;

  double total = 0.0;
  for (int u = assigned; u < n; ++u) {
    scratch.clear();
    for (int v = 0; v < assigned; ++v) {
      if (group_sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(v)])] < b) {
        scratch.push_back(dist.at_unchecked(u, v));
      }
    }
    for (int w = assigned; w < n; ++w) {
      if (w != u) scratch.push_back(0.5 * dist.at_unchecked(u, w));
    }
    const auto take = std::min(scratch.size(), static_cast<std::size_t>(b - 1));
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take), scratch.end(),
                      std::greater<>());
    for (std::size_t t = 0; t < take; ++t) {
      if (static_cast<int>(t) >= a - 1 && scratch[t] <= 0.0) break;
      total += scratch[t];
    }
  }
  return total;
}

inline bool completable(const Instance& instance, int next, std::span<const int> group_sizes, int opened) {
  const int remaining = instance.size() - next;
  const int unopened = instance.groups() - opened;
  int deficit = unopened * instance.min_size();
  int capacity = unopened * instance.max_size();
  for (int g = 0; g < opened; ++g) {
    const int s = group_sizes[static_cast<std::size_t>(g)];
    if (s < instance.min_size()) deficit += instance.min_size() - s;
    capacity += instance.max_size() - s;
  }
  return deficit <= remaining && remaining <= capacity;
}

struct NoObserver {
  void operator()(const PartialAssignment&, double, double) const noexcept {}
};

template <typename Observer>
class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance, const SolveOptions& opts, Observer& observer)
      : inst_(instance), opts_(opts), observer_(observer), start_(std::chrono::steady_clock::now()) {
    if (opts_.time_limit) deadline_ = start_ + *opts_.time_limit;
  }

  OptimalResult run() {
    const int n = inst_.size();
    if (opts_.warm_start_restarts > 0) {
      auto h = multistart(inst_, opts_.warm_start_restarts, opts_.warm_start_seed);
      best_value_ = h.value;
      best_labels_.assign(h.grouping.labels().begin(), h.grouping.labels().end());
    }
    best_snapshot_.store(best_value_, std::memory_order_relaxed);

    const int workers = std::max(1, opts_.workers);
    if (workers == 1) {
      Worker w(inst_);
      dfs_best_first(w, 0);
    } else {
      run_parallel(workers);
    }
    const bool proven = !stop_.load();

    if (proven && opts_.canonical_ties && !best_labels_.empty()) {
      Worker w(inst_);
      target_ = best_value_;
      slack_ = 4.0 * (static_cast<double>(pair_count(n)) + 1.0) * std::numeric_limits<double>::epsilon() *
               inst_.distances().abs_sum();
      dfs_lexicographic(w, 0);
      if (!lex_labels_.empty()) best_labels_ = lex_labels_;
    }

    if (best_labels_.empty()) {
      // Budget ran out before any leaf and no warm start was requested.
      auto g = greedy_construct(inst_, opts_.warm_start_seed);
      best_labels_.assign(g.labels().begin(), g.labels().end());
    }

    OptimalResult result;
    result.grouping = canonicalize(Grouping(best_labels_));
    result.value = objective_value(result.grouping, inst_.distances());
    result.nodes_explored = nodes_.load();
    result.proven = proven;
    result.elapsed = std::chrono::steady_clock::now() - start_;
    return result;
  }

 private:
  struct Worker {
    explicit Worker(const Instance& inst)
        : labels(static_cast<std::size_t>(inst.size()), -1),
          sizes(static_cast<std::size_t>(inst.groups()), 0),
          choices(static_cast<std::size_t>(inst.size())),
          gains(static_cast<std::size_t>(inst.groups()), 0.0) {}

    std::vector<int> labels;
    std::vector<int> sizes;
    int opened = 0;
    double value = 0.0;
    std::vector<double> scratch;
    std::vector<std::vector<std::pair<double, int>>> choices;  // per depth
    std::vector<double> gains;
    std::uint64_t local_nodes = 0;
  };

  struct FrontierNode {
    std::vector<int> labels;  // assigned prefix
    std::vector<int> sizes;
    int opened;
    double value;
  };

  bool count_node(Worker& w) {
    if (stop_.load(std::memory_order_relaxed)) return false;
    const auto c = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (opts_.node_limit && c > *opts_.node_limit) {
      stop_.store(true);
      return false;
    }
    if (deadline_ && (++w.local_nodes & 1023) == 0 && std::chrono::steady_clock::now() > *deadline_) {
      stop_.store(true);
      return false;
    }
    return true;
  }

  double bound_at(Worker& w, int k) {
    if (k == inst_.size()) return 0.0;
    return completion_bound(inst_, w.labels, k, std::span<const int>(w.sizes).first(static_cast<std::size_t>(w.opened)),
                            w.scratch);
  }

  void observe(const Worker& w, int k, double bound) {
    if constexpr (!std::is_same_v<std::remove_cvref_t<Observer>, NoObserver>) {
      PartialAssignment state;
      state.labels.assign(w.labels.begin(), w.labels.begin() + k);
      state.group_sizes.assign(w.sizes.begin(), w.sizes.begin() + w.opened);
      observer_(state, w.value, bound);
    }
  }

  // Candidate groups for element k with their objective increments.
  void expand(Worker& w, int k, std::vector<std::pair<double, int>>& out) const {
    out.clear();
    const auto& dist = inst_.distances();
    std::fill(w.gains.begin(), w.gains.begin() + w.opened, 0.0);
    for (int v = 0; v < k; ++v) w.gains[static_cast<std::size_t>(w.labels[static_cast<std::size_t>(v)])] += dist.at_unchecked(k, v);
    for (int g = 0; g < w.opened; ++g) {
      if (w.sizes[static_cast<std::size_t>(g)] < inst_.max_size()) out.emplace_back(w.gains[static_cast<std::size_t>(g)], g);
    }
    if (w.opened < inst_.groups()) out.emplace_back(0.0, w.opened);
  }

  // Runs `body` for each child of node k that can still be completed.
  template <typename Body>
  void for_children(Worker& w, int k, const std::vector<std::pair<double, int>>& choices, Body&& body) {
    for (const auto& [gain, g] : choices) {
      const int before = w.opened;
      const double value_before = w.value;
      w.labels[static_cast<std::size_t>(k)] = g;
      ++w.sizes[static_cast<std::size_t>(g)];
      if (g == w.opened) ++w.opened;
      w.value += gain;
      if (completable(inst_, k + 1, w.sizes, w.opened)) body();
      w.value = value_before;
      w.opened = before;
      --w.sizes[static_cast<std::size_t>(g)];
      w.labels[static_cast<std::size_t>(k)] = -1;
      if (stop_.load(std::memory_order_relaxed)) return;
    }
  }

  void offer(const Worker& w) {
    if (!(w.value > best_snapshot_.load(std::memory_order_relaxed))) return;
    std::lock_guard lock(mutex_);
    if (w.value > best_value_) {
      best_value_ = w.value;
      best_labels_ = w.labels;
      best_snapshot_.store(best_value_, std::memory_order_relaxed);
    }
  }

  void dfs_best_first(Worker& w, int k) {
    if (!count_node(w)) return;
    const double bound = bound_at(w, k);
    observe(w, k, bound);
    if (k == inst_.size()) {
      offer(w);
      return;
    }
    if (!(w.value + bound > best_snapshot_.load(std::memory_order_relaxed))) return;

    auto& choices = w.choices[static_cast<std::size_t>(k)];
    expand(w, k, choices);
    std::stable_sort(choices.begin(), choices.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for_children(w, k, choices, [&] { dfs_best_first(w, k + 1); });
  }

  // Lexicographic descent towards the first leaf reaching the target.
  bool dfs_lexicographic(Worker& w, int k) {
    if (!count_node(w)) return false;
    if (k == inst_.size()) {
      const double v = labels_objective(w.labels, inst_.distances());
      if (v >= target_ - slack_) {
        lex_labels_ = w.labels;
        return true;
      }
      return false;
    }
    if (w.value + bound_at(w, k) < target_ - slack_) return false;

    auto& choices = w.choices[static_cast<std::size_t>(k)];
    expand(w, k, choices);
    bool found = false;
    for_children(w, k, choices, [&] {
      if (!found) found = dfs_lexicographic(w, k + 1);
    });
    return found;
  }

  void run_parallel(int workers) {
    const int n = inst_.size();
    std::vector<FrontierNode> frontier{{{}, std::vector<int>(static_cast<std::size_t>(inst_.groups()), 0), 0, 0.0}};
    int depth = 0;
    const auto wanted = static_cast<std::size_t>(8 * workers);
    Worker scratch(inst_);
    while (depth < n && frontier.size() < wanted) {
      std::vector<FrontierNode> next;
      for (const auto& node : frontier) {
        std::copy(node.labels.begin(), node.labels.end(), scratch.labels.begin());
        scratch.sizes = node.sizes;
        scratch.opened = node.opened;
        scratch.value = node.value;
        std::vector<std::pair<double, int>> choices;
        expand(scratch, depth, choices);
        std::stable_sort(choices.begin(), choices.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        for_children(scratch, depth, choices, [&] {
          next.push_back({std::vector<int>(scratch.labels.begin(), scratch.labels.begin() + depth + 1),
                          scratch.sizes, scratch.opened, scratch.value});
        });
      }
      frontier = std::move(next);
      ++depth;
    }

    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
      Worker w(inst_);
      for (;;) {
        const auto idx = cursor.fetch_add(1);
        if (idx >= frontier.size() || stop_.load()) return;
        const auto& node = frontier[idx];
        std::fill(w.labels.begin(), w.labels.end(), -1);
        std::copy(node.labels.begin(), node.labels.end(), w.labels.begin());
        w.sizes = node.sizes;
        w.opened = node.opened;
        w.value = node.value;
        dfs_best_first(w, depth);
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  const Instance& inst_;
  SolveOptions opts_;
  Observer& observer_;
  std::chrono::steady_clock::time_point start_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;

  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> stop_{false};
  std::mutex mutex_;
  double best_value_ = -std::numeric_limits<double>::infinity();
  std::atomic<double> best_snapshot_{-std::numeric_limits<double>::infinity()};
  std::vector<int> best_labels_;

  double target_ = 0.0;
  double slack_ = 0.0;
  std::vector<int> lex_labels_;
};

}  // namespace detail

inline double upper_bound(const Instance& instance, const PartialAssignment& state) {
  const auto k = state.labels.size();
  if (k > static_cast<std::size_t>(instance.size())) throw ContractViolation("partial assignment longer than N");
  std::vector<int> sizes(state.group_sizes.size(), 0);
  for (int l : state.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= sizes.size()) {
      throw ContractViolation("partial assignment label out of range");
    }
    ++sizes[static_cast<std::size_t>(l)];
  }
  if (sizes != state.group_sizes) throw ContractViolation("partial assignment group sizes are inconsistent");
  std::vector<double> scratch;
  return detail::completion_bound(instance, state.labels, static_cast<int>(k), state.group_sizes, scratch);
}

// Observer is called as observer(PartialAssignment, prefix_value, bound) at
// every node of the best-first pass. With workers > 1 it is called
// concurrently and frontier nodes above the split depth are not reported.
template <typename Observer>
OptimalResult solve_bnb(const Instance& instance, const SolveOptions& opts, Observer&& observer) {
  if (opts.node_limit && *opts.node_limit == 0) throw ContractViolation("node budget must be positive");
  if (opts.time_limit && opts.time_limit->count() <= 0) throw ContractViolation("time budget must be positive");
  detail::BranchAndBound<std::remove_reference_t<Observer>> search(instance, opts, observer);
  return search.run();
}

inline OptimalResult solve_bnb(const Instance& instance, const SolveOptions& opts = {}) {
  detail::NoObserver none;
  return solve_bnb(instance, opts, none);
}

// Maximum over all feasible partitions; ties go to the lexicographically
// smallest canonical labeling.
inline OptimalResult solve_bruteforce(const Instance& instance, int max_n = kBruteforceCap) {
  detail::check_bruteforce_cap(instance, max_n);
  const auto start = std::chrono::steady_clock::now();
  const auto& dist = instance.distances();
  std::vector<int> best;
  double best_value = 0.0;
  std::uint64_t visited = 0;
  for_each_bounded_partition(instance.size(), instance.groups(), instance.min_size(), instance.max_size(),
                             [&](std::span<const int> labels) {
                               ++visited;
                               const double v = detail::labels_objective(labels, dist);
                               if (best.empty() || v > best_value) {
                                 best.assign(labels.begin(), labels.end());
                                 best_value = v;
                               }
                             });
  OptimalResult result;
  result.grouping = Grouping(std::move(best));
  result.value = best_value;
  result.nodes_explored = visited;
  result.proven = true;
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

inline std::uint64_t count_feasible_partitions(const Instance& instance, int max_n = kBruteforceCap) {
  detail::check_bruteforce_cap(instance, max_n);
  std::uint64_t count = 0;
  for_each_bounded_partition(instance.size(), instance.groups(), instance.min_size(), instance.max_size(),
                             [&](std::span<const int>) { ++count; });
  return count;
}

}  // namespace mdgp
