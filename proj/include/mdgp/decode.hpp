#pragma once

// Turns pair-variable values back into a partition and checks, on concrete
// leader values, the two mechanisms that pin the group count to G:
//   (i)  no group holds two leaders (element 0 counts as a leader);
//   (ii) every group's smallest member is a leader.

#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mdgp/core.hpp"
#include "mdgp/model.hpp"

namespace mdgp {

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      auto& p = parent_[static_cast<std::size_t>(v)];
      p = parent_[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }

  // Smaller root wins so that each root is its component's minimum.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

// First triple i<j<k in lexicographic order with exactly two of its three
// pairs set; such a triple violates one of the triangle rows.
inline std::array<int, 3> first_intransitive_triple(std::span<const std::uint8_t> x, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int ones = x[pair_index(i, j, n)] + x[pair_index(i, k, n)] + x[pair_index(j, k, n)];
        if (ones == 2) return {i, j, k};
      }
    }
  }
  return {-1, -1, -1};
}

}  // namespace detail

// `x` holds pair values in pair_index order. The result is canonical.
inline Grouping decode_partition(std::span<const std::uint8_t> x, int n) {
  if (n < 1) throw ContractViolation("decode needs at least one element");
  if (x.size() != pair_count(n)) {
    throw ContractViolation("expected " + std::to_string(pair_count(n)) + " pair values, got " +
                            std::to_string(x.size()));
  }
  detail::DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto v = x[pair_index(i, j, n)];
      if (v > 1) throw ContractViolation("pair values must be binary");
      if (v) sets.unite(i, j);
    }
  }

  std::vector<int> root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) root[static_cast<std::size_t>(i)] = sets.find(i);

  // Every pair inside a component must be set, otherwise transitivity fails.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (root[static_cast<std::size_t>(i)] == root[static_cast<std::size_t>(j)] && !x[pair_index(i, j, n)]) {
        const auto t = detail::first_intransitive_triple(x, n);
        throw DecodeError(t, "pair values are not transitive on triple (" + std::to_string(t[0] + 1) +
                                 ", " + std::to_string(t[1] + 1) + ", " + std::to_string(t[2] + 1) + ")");
      }
    }
  }

  std::vector<int> label_of_root(static_cast<std::size_t>(n), -1);
  std::vector<int> labels(static_cast<std::size_t>(n));
  int next = 0;
  for (int i = 0; i < n; ++i) {
    auto& l = label_of_root[static_cast<std::size_t>(root[static_cast<std::size_t>(i)])];
    if (l < 0) l = next++;
    labels[static_cast<std::size_t>(i)] = l;
  }
  return Grouping(std::move(labels));
}

inline Grouping decode_partition(const PairAssignment& asg) {
  return decode_partition(asg.pair_values(), asg.size());
}

struct DecodeReport {
  Grouping grouping;
  int group_count = 0;
  std::vector<int> leaders;  // ascending; element 0 always included
};

inline DecodeReport decode(const PairAssignment& asg) {
  DecodeReport report;
  report.grouping = decode_partition(asg);
  report.group_count = report.grouping.group_count();
  report.leaders.push_back(0);
  if (asg.has_leaders()) {
    for (int j = 1; j < asg.size(); ++j) {
      if (asg.y(j)) report.leaders.push_back(j);
    }
  }
  return report;
}

struct TheoremReport {
  bool at_most_one_leader = true;       // (i)
  bool minimum_is_leader = true;        // (ii)
  bool leader_count_matches = false;    // sum y == G - 1
  bool group_count_matches = false;     // G' == G
  bool count_implication = true;        // (i) && (ii) && sum y == G-1  =>  G' == G
  int group_count = 0;
  int leader_count = 0;                 // sum of y, excluding element 0
  std::vector<std::string> failures;

  bool holds() const noexcept { return at_most_one_leader && minimum_is_leader && group_count_matches; }
};

inline TheoremReport verify_group_count(const DecodeReport& report, const PairAssignment& asg, int groups) {
  const int n = asg.size();
  if (report.grouping.size() != n) throw ContractViolation("decode report and assignment sizes differ");
  if (!asg.has_leaders()) throw ContractViolation("group-count verification needs leader variables");

  TheoremReport out;
  out.group_count = report.group_count;

  const auto canonical = canonicalize(report.grouping);
  const auto members = canonical.groups();
  for (std::size_t g = 0; g < members.size(); ++g) {
    int leaders = 0;
    for (int e : members[g]) {
      if (e == 0 || asg.y(e)) ++leaders;
    }
    if (leaders > 1) {
      out.at_most_one_leader = false;
      out.failures.push_back("group " + std::to_string(g + 1) + " holds " + std::to_string(leaders) +
                             " leaders");
    }
    const int smallest = members[g].front();
    if (smallest != 0 && !asg.y(smallest)) {
      out.minimum_is_leader = false;
      out.failures.push_back("group " + std::to_string(g + 1) + " minimum " + std::to_string(smallest + 1) +
                             " has y = 0");
    }
  }

  for (int j = 1; j < n; ++j) out.leader_count += asg.y(j);
  out.leader_count_matches = out.leader_count == groups - 1;
  out.group_count_matches = out.group_count == groups;
  if (out.at_most_one_leader && out.minimum_is_leader && out.leader_count_matches) {
    out.count_implication = out.group_count_matches;
  }
  if (!out.group_count_matches) {
    out.failures.push_back("decoded " + std::to_string(out.group_count) + " groups, expected " +
                           std::to_string(groups));
  }
  return out;
}

}  // namespace mdgp
