#pragma once

// Set-partition enumeration over restricted-growth strings. Labels are
// produced in lexicographic order, so the first partition reached with a
// given property is also the lexicographically smallest canonical one.

#include <span>
#include <vector>

namespace mdgp {

namespace detail {

template <typename Visit>
void rgs_all(int i, int n, int blocks, std::vector<int>& labels, Visit& visit) {
  if (i == n) {
    visit(std::span<const int>(labels), blocks);
    return;
  }
  for (int l = 0; l <= blocks; ++l) {
    labels[static_cast<std::size_t>(i)] = l;
    rgs_all(i + 1, n, l == blocks ? blocks + 1 : blocks, labels, visit);
  }
}

struct BoundedRgs {
  int n;
  int groups;
  int min_size;
  int max_size;
  std::vector<int> labels;
  std::vector<int> sizes;

  // Can elements i..n-1 still complete `opened` groups to a valid partition?
  bool completable(int next, int opened) const {
    const int remaining = n - next;
    const int unopened = groups - opened;
    int deficit = unopened * min_size;
    int capacity = unopened * max_size;
    for (int g = 0; g < opened; ++g) {
      const int s = sizes[static_cast<std::size_t>(g)];
      if (s < min_size) deficit += min_size - s;
      capacity += max_size - s;
    }
    return deficit <= remaining && remaining <= capacity;
  }

  template <typename Visit>
  void run(int i, int opened, Visit& visit) {
    if (i == n) {
      visit(std::span<const int>(labels));
      return;
    }
    const int limit = opened < groups ? opened : opened - 1;
    for (int l = 0; l <= limit; ++l) {
      auto& s = sizes[static_cast<std::size_t>(l)];
      if (s == max_size) continue;
      labels[static_cast<std::size_t>(i)] = l;
      ++s;
      const int now_open = l == opened ? opened + 1 : opened;
      if (completable(i + 1, now_open)) run(i + 1, now_open, visit);
      --s;
    }
  }
};

}  // namespace detail

// Every set partition of {0..n-1}; visit(labels, block_count).
template <typename Visit>
void for_each_partition(int n, Visit&& visit) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  if (n == 0) return;
  detail::rgs_all(1, n, 1, labels, visit);
}

// Partitions into exactly `groups` blocks with every size in
// [min_size, max_size]; visit(labels). Infeasible branches are cut as soon
// as the remaining elements cannot fill or cannot fit the groups.
template <typename Visit>
void for_each_bounded_partition(int n, int groups, int min_size, int max_size, Visit&& visit) {
  if (n < 1 || groups < 1 || groups > n) return;
  detail::BoundedRgs rgs{n,
                         groups,
                         min_size,
                         max_size,
                         std::vector<int>(static_cast<std::size_t>(n), 0),
                         std::vector<int>(static_cast<std::size_t>(groups), 0)};
  if (!rgs.completable(0, 0)) return;
  rgs.run(0, 0, visit);
}

}  // namespace mdgp
