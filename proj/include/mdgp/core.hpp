#pragma once

// Domain types for the maximally diverse grouping problem: distances,
// instances, groupings, and the objective/feasibility semantics every
// formulation and solver in this library is checked against.
//
// All indices in the C++ API are 0-based. Text formats and reports use
// 1-based indices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mdgp/error.hpp"

namespace mdgp {

// Offset of pair (i, j), i < j, in row-major upper-triangular storage.
constexpr std::size_t pair_index(int i, int j, int n) noexcept {
  const auto si = static_cast<std::size_t>(i);
  const auto sn = static_cast<std::size_t>(n);
  return si * (2 * sn - si - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

constexpr std::size_t pair_count(int n) noexcept {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

// Symmetric dissimilarities with an implicit zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(int n) : n_(n), upper_(pair_count(n), 0.0) {
    if (n < 1) throw ContractViolation("distance matrix needs at least one element");
  }

  // `upper` holds d(i,j) for i<j in row-major order: (0,1),(0,2),...,(1,2),...
  DistanceMatrix(int n, std::vector<double> upper) : n_(n), upper_(std::move(upper)) {
    if (n < 1) throw ContractViolation("distance matrix needs at least one element");
    if (upper_.size() != pair_count(n)) {
      throw ContractViolation("expected " + std::to_string(pair_count(n)) + " distances, got " +
                              std::to_string(upper_.size()));
    }
    for (double v : upper_) {
      if (!std::isfinite(v)) throw InvalidInstance("distance entries must be finite");
    }
  }

  template <typename F>
  static DistanceMatrix from_function(int n, F&& dist) {
    std::vector<double> upper;
    upper.reserve(pair_count(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) upper.push_back(static_cast<double>(dist(i, j)));
    }
    return DistanceMatrix(n, std::move(upper));
  }

  int size() const noexcept { return n_; }

  double operator()(int i, int j) const {
    check_index(i);
    check_index(j);
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return upper_[pair_index(i, j, n_)];
  }

  // Unchecked lookup for hot loops; requires i != j.
  double at_unchecked(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    return upper_[pair_index(i, j, n_)];
  }

  std::span<const double> upper() const noexcept { return upper_; }

  bool has_negative() const noexcept {
    return std::any_of(upper_.begin(), upper_.end(), [](double v) { return v < 0.0; });
  }

  double abs_sum() const noexcept {
    double s = 0.0;
    for (double v : upper_) s += std::abs(v);
    return s;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  void check_index(int i) const {
    if (i < 0 || i >= n_) {
      throw ContractViolation("element index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(n_) + ")");
    }
  }

  int n_ = 0;
  std::vector<double> upper_;
};

enum class AttributeKind { numeric, categorical };

using AttributeValue = std::variant<double, std::string>;

// Raw per-element records behind a distance matrix.
class AttributeTable {
 public:
  AttributeTable(std::vector<AttributeKind> schema, std::vector<std::vector<AttributeValue>> rows)
      : schema_(std::move(schema)), rows_(std::move(rows)) {
    if (schema_.empty()) throw SchemaError("attribute table needs at least one attribute");
    if (rows_.empty()) throw SchemaError("attribute table needs at least one row");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r].size() != schema_.size()) {
        throw SchemaError("row " + std::to_string(r + 1) + " has " +
                          std::to_string(rows_[r].size()) + " values, schema has " +
                          std::to_string(schema_.size()));
      }
      for (std::size_t k = 0; k < schema_.size(); ++k) {
        const bool numeric = std::holds_alternative<double>(rows_[r][k]);
        if (numeric != (schema_[k] == AttributeKind::numeric)) {
          throw SchemaError("row " + std::to_string(r + 1) + " attribute " +
                            std::to_string(k + 1) + " does not match schema kind");
        }
        if (numeric && !std::isfinite(std::get<double>(rows_[r][k]))) {
          throw SchemaError("row " + std::to_string(r + 1) + " attribute " +
                            std::to_string(k + 1) + " is not finite");
        }
      }
    }
  }

  int size() const noexcept { return static_cast<int>(rows_.size()); }
  int width() const noexcept { return static_cast<int>(schema_.size()); }
  std::span<const AttributeKind> schema() const noexcept { return schema_; }
  const std::vector<AttributeValue>& row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }

  bool all_numeric() const noexcept {
    return std::all_of(schema_.begin(), schema_.end(),
                       [](AttributeKind k) { return k == AttributeKind::numeric; });
  }

  double numeric(int i, int k) const { return std::get<double>(row(i)[static_cast<std::size_t>(k)]); }

 private:
  std::vector<AttributeKind> schema_;
  std::vector<std::vector<AttributeValue>> rows_;
};

enum class Metric { manhattan, euclidean, gower };

inline std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::manhattan: return "manhattan";
    case Metric::euclidean: return "euclidean";
    case Metric::gower: return "gower";
  }
  return "unknown";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "manhattan") return Metric::manhattan;
  if (name == "euclidean") return Metric::euclidean;
  if (name == "gower") return Metric::gower;
  throw SchemaError("unknown metric '" + std::string(name) + "'");
}

// Gower: numeric attributes contribute |v_i - v_j| / range (0 when the range
// is zero), categorical attributes contribute 0 or 1; the result is the mean.
inline DistanceMatrix distance_matrix(const AttributeTable& table, Metric metric) {
  const int n = table.size();
  const int width = table.width();
  const auto schema = table.schema();

  if (metric != Metric::gower && !table.all_numeric()) {
    throw SchemaError(std::string(to_string(metric)) + " metric requires all-numeric attributes");
  }

  std::vector<double> range(static_cast<std::size_t>(width), 0.0);
  if (metric == Metric::gower) {
    for (int k = 0; k < width; ++k) {
      if (schema[static_cast<std::size_t>(k)] != AttributeKind::numeric) continue;
      double lo = table.numeric(0, k), hi = lo;
      for (int i = 1; i < n; ++i) {
        lo = std::min(lo, table.numeric(i, k));
        hi = std::max(hi, table.numeric(i, k));
      }
      range[static_cast<std::size_t>(k)] = hi - lo;
    }
  }

  return DistanceMatrix::from_function(n, [&](int i, int j) {
    double acc = 0.0;
    for (int k = 0; k < width; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      switch (metric) {
        case Metric::manhattan:
          acc += std::abs(table.numeric(i, k) - table.numeric(j, k));
          break;
        case Metric::euclidean: {
          const double diff = table.numeric(i, k) - table.numeric(j, k);
          acc += diff * diff;
          break;
        }
        case Metric::gower:
          if (schema[sk] == AttributeKind::numeric) {
            if (range[sk] > 0.0) acc += std::abs(table.numeric(i, k) - table.numeric(j, k)) / range[sk];
          } else if (table.row(i)[sk] != table.row(j)[sk]) {
            acc += 1.0;
          }
          break;
      }
    }
    if (metric == Metric::euclidean) return std::sqrt(acc);
    if (metric == Metric::gower) return acc / static_cast<double>(width);
    return acc;
  });
}

// Throws InvalidInstance unless a partition of n elements into exactly
// `groups` groups with sizes in [min_size, max_size] exists.
inline void check_instance_shape(int n, int groups, int min_size, int max_size) {
  auto fail = [&](const std::string& why) {
    throw InvalidInstance("infeasible instance (N=" + std::to_string(n) + " G=" +
                          std::to_string(groups) + " a=" + std::to_string(min_size) + " b=" +
                          std::to_string(max_size) + "): " + why);
  };
  if (n < 1) fail("N must be at least 1");
  if (groups < 1) fail("G must be at least 1");
  if (min_size < 1) fail("a must be at least 1");
  if (min_size > max_size) fail("a > b");
  if (max_size > n) fail("b > N");
  if (static_cast<long long>(groups) * min_size > n) fail("G*a > N");
  if (static_cast<long long>(groups) * max_size < n) fail("G*b < N");
}

class Instance {
 public:
  Instance(DistanceMatrix dist, int groups, int min_size, int max_size)
      : dist_(std::move(dist)), groups_(groups), min_size_(min_size), max_size_(max_size) {
    check_instance_shape(dist_.size(), groups_, min_size_, max_size_);
  }

  int size() const noexcept { return dist_.size(); }
  int groups() const noexcept { return groups_; }
  int min_size() const noexcept { return min_size_; }
  int max_size() const noexcept { return max_size_; }
  const DistanceMatrix& distances() const noexcept { return dist_; }

 private:
  DistanceMatrix dist_;
  int groups_;
  int min_size_;
  int max_size_;
};

// A partition of {0..n-1}, stored as one group label per element. Labels are
// dense (0..group_count()-1, each used) but not necessarily canonical.
class Grouping {
 public:
  Grouping() = default;

  explicit Grouping(std::vector<int> labels) : labels_(std::move(labels)) {
    int max_label = -1;
    for (int l : labels_) {
      if (l < 0) throw ContractViolation("group labels must be nonnegative");
      max_label = std::max(max_label, l);
    }
    std::vector<char> used(static_cast<std::size_t>(max_label + 1), 0);
    for (int l : labels_) used[static_cast<std::size_t>(l)] = 1;
    if (std::find(used.begin(), used.end(), 0) != used.end()) {
      throw ContractViolation("group labels must be dense (no empty groups)");
    }
    count_ = max_label + 1;
  }

  // Groups of 0-based members; together they must cover {0..n-1} exactly once.
  static Grouping from_groups(std::span<const std::vector<int>> groups) {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    std::vector<int> labels(n, -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty()) throw ContractViolation("empty group");
      for (int e : groups[g]) {
        if (e < 0 || static_cast<std::size_t>(e) >= n) {
          throw ContractViolation("element " + std::to_string(e) + " out of range");
        }
        if (labels[static_cast<std::size_t>(e)] != -1) {
          throw ContractViolation("element " + std::to_string(e) + " appears twice");
        }
        labels[static_cast<std::size_t>(e)] = static_cast<int>(g);
      }
    }
    return Grouping(std::move(labels));
  }

  static Grouping from_groups(std::initializer_list<std::vector<int>> groups) {
    return from_groups(std::span<const std::vector<int>>(groups.begin(), groups.size()));
  }

  // Convenience for writing partitions the way they are usually printed.
  static Grouping from_one_based(std::initializer_list<std::vector<int>> groups) {
    std::vector<std::vector<int>> shifted(groups);
    for (auto& g : shifted) {
      for (int& e : g) --e;
    }
    return from_groups(shifted);
  }

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  int group_count() const noexcept { return count_; }
  int label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  std::span<const int> labels() const noexcept { return labels_; }

  // Members ascending, groups in label order.
  std::vector<std::vector<int>> groups() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(count_));
    for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(labels_[static_cast<std::size_t>(i)])].push_back(i);
    return out;
  }

  std::vector<int> group_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(count_), 0);
    for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
  }

  // Canonical labels are a restricted-growth string: each new label is
  // exactly one more than the largest seen so far.
  bool is_canonical() const noexcept {
    int next = 0;
    for (int l : labels_) {
      if (l > next) return false;
      if (l == next) ++next;
    }
    return true;
  }

  friend bool operator==(const Grouping&, const Grouping&) = default;

 private:
  std::vector<int> labels_;
  int count_ = 0;
};

// Relabel groups in order of their smallest member.
inline Grouping canonicalize(const Grouping& grouping) {
  std::vector<int> remap(static_cast<std::size_t>(grouping.group_count()), -1);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(grouping.size()));
  int next = 0;
  for (int l : grouping.labels()) {
    auto& m = remap[static_cast<std::size_t>(l)];
    if (m < 0) m = next++;
    labels.push_back(m);
  }
  return Grouping(std::move(labels));
}

namespace detail {

// Fixed lexicographic pair order; every objective in the library goes
// through here so equal partitions give bit-identical sums.
inline double labels_objective(std::span<const int> labels, const DistanceMatrix& dist) {
  const auto upper = dist.upper();
  const int n = dist.size();
  double total = 0.0;
  std::size_t p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++p) {
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) total += upper[p];
    }
  }
  return total;
}

}  // namespace detail

// Sum of d(i,j) over same-group pairs.
inline double objective_value(const Grouping& grouping, const DistanceMatrix& dist) {
  if (grouping.size() != dist.size()) {
    throw ContractViolation("grouping covers " + std::to_string(grouping.size()) +
                            " elements, distance matrix has " + std::to_string(dist.size()));
  }
  return detail::labels_objective(grouping.labels(), dist);
}

struct Violation {
  enum class Kind { group_count, below_min_size, above_max_size };

  Kind kind;
  int group;   // canonical 0-based group, -1 for group_count
  int actual;  // observed count or size
  int bound;

  std::string describe() const {
    switch (kind) {
      case Kind::group_count:
        return "group count " + std::to_string(actual) + " != " + std::to_string(bound);
      case Kind::below_min_size:
        return "group " + std::to_string(group + 1) + " has size " + std::to_string(actual) +
               " < a=" + std::to_string(bound);
      case Kind::above_max_size:
        return "group " + std::to_string(group + 1) + " has size " + std::to_string(actual) +
               " > b=" + std::to_string(bound);
    }
    return {};
  }

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

inline FeasibilityReport validate_grouping(const Grouping& grouping, const Instance& instance) {
  if (grouping.size() != instance.size()) {
    throw ContractViolation("grouping covers " + std::to_string(grouping.size()) +
                            " elements, instance has " + std::to_string(instance.size()));
  }
  FeasibilityReport report;
  const auto canonical = canonicalize(grouping);
  if (canonical.group_count() != instance.groups()) {
    report.violations.push_back(
        {Violation::Kind::group_count, -1, canonical.group_count(), instance.groups()});
  }
  const auto sizes = canonical.group_sizes();
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    if (sizes[g] < instance.min_size()) {
      report.violations.push_back(
          {Violation::Kind::below_min_size, static_cast<int>(g), sizes[g], instance.min_size()});
    } else if (sizes[g] > instance.max_size()) {
      report.violations.push_back(
          {Violation::Kind::above_max_size, static_cast<int>(g), sizes[g], instance.max_size()});
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

}  // namespace mdgp
