#pragma once

// Integer linear programming formulations over pair variables x(i,j)
// ("i and j share a group") and, for the unequal-size model, leader
// variables y(j) ("j is the smallest index in its group", j >= 1).
//
// Three variants are built:
//   equal        triangle rows + deg(i) = N/G - 1
//   unequal      triangle rows + a-1 <= deg(i) <= b-1 + leader rows
//   degree_only  triangle rows + a-1 <= deg(i) <= b-1 (admits any group count)
//
// Triangle rows for i<j<k:
//   tri1: x_ij + x_jk - x_ik <= 1
//   tri2: x_ij + x_ik - x_jk <= 1
//   tri3: x_ik + x_jk - x_ij <= 1
// Leader rows:
//   lex_i_j:  x_ij + y_j <= 1              for all i<j
//   lforce_j: sum_{i<j} x_ij + y_j >= 1    for j >= 2 (1-based)
//   lcount:   sum_j y_j = G - 1
// Element 1 has no leader variable; it always leads its own group.

#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mdgp/core.hpp"

namespace mdgp {

enum class VarKind : std::uint8_t { pair, leader };

// 0-based; names are printed 1-based (x_<i>_<j>, y_<j>).
struct VarRef {
  VarKind kind = VarKind::pair;
  int i = 0;  // pair: smaller index; leader: unused (-1)
  int j = 0;

  static constexpr VarRef pair(int a, int b) noexcept {
    return a < b ? VarRef{VarKind::pair, a, b} : VarRef{VarKind::pair, b, a};
  }
  static constexpr VarRef leader(int j) noexcept { return VarRef{VarKind::leader, -1, j}; }

  std::string name() const {
    if (kind == VarKind::pair) return "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    return "y_" + std::to_string(j + 1);
  }

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

enum class Sense { le, ge, eq };

inline std::string_view to_string(Sense s) noexcept {
  switch (s) {
    case Sense::le: return "<=";
    case Sense::ge: return ">=";
    case Sense::eq: return "=";
  }
  return "?";
}

struct Term {
  int coefficient;
  VarRef var;

  friend bool operator==(const Term&, const Term&) = default;
};

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense;
  int rhs;

  bool satisfied_by(long long lhs) const noexcept {
    switch (sense) {
      case Sense::le: return lhs <= rhs;
      case Sense::ge: return lhs >= rhs;
      case Sense::eq: return lhs == rhs;
    }
    return false;
  }

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

struct ObjectiveTerm {
  double coefficient;
  VarRef var;
};

enum class ModelVariant { equal, unequal, degree_only };

inline std::string_view to_string(ModelVariant v) noexcept {
  switch (v) {
    case ModelVariant::equal: return "equal";
    case ModelVariant::unequal: return "unequal";
    case ModelVariant::degree_only: return "degree-only";
  }
  return "unknown";
}

inline ModelVariant parse_model_variant(std::string_view name) {
  if (name == "equal") return ModelVariant::equal;
  if (name == "unequal") return ModelVariant::unequal;
  if (name == "degree-only" || name == "degree_only") return ModelVariant::degree_only;
  throw FormulationError("unknown model variant '" + std::string(name) + "'");
}

inline bool has_leader_variables(ModelVariant v) noexcept { return v == ModelVariant::unequal; }

// A maximization ILP with binary variables. Immutable once built.
class IlpModel {
 public:
  IlpModel(int n, ModelVariant variant, std::vector<VarRef> variables,
           std::vector<ObjectiveTerm> objective, std::vector<LinearConstraint> constraints)
      : n_(n),
        variant_(variant),
        variables_(std::move(variables)),
        objective_(std::move(objective)),
        constraints_(std::move(constraints)) {
    for (const auto& t : objective_) {
      if (t.var.kind != VarKind::pair) throw ContractViolation("objective may only use pair variables");
    }
    for (const auto& c : constraints_) {
      std::set<VarRef> seen;
      for (const auto& t : c.terms) {
        if (!seen.insert(t.var).second) {
          throw ContractViolation("constraint " + c.name + " repeats variable " + t.var.name());
        }
      }
    }
  }

  int size() const noexcept { return n_; }
  ModelVariant variant() const noexcept { return variant_; }
  const std::vector<VarRef>& variables() const noexcept { return variables_; }
  const std::vector<ObjectiveTerm>& objective() const noexcept { return objective_; }
  const std::vector<LinearConstraint>& constraints() const noexcept { return constraints_; }

  const LinearConstraint* find(std::string_view name) const {
    for (const auto& c : constraints_) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

 private:
  int n_;
  ModelVariant variant_;
  std::vector<VarRef> variables_;
  std::vector<ObjectiveTerm> objective_;
  std::vector<LinearConstraint> constraints_;
};

// Binary values for a model's variables.
class PairAssignment {
 public:
  explicit PairAssignment(int n, bool with_leaders = false)
      : n_(n), x_(pair_count(n), 0) {
    if (with_leaders) y_.emplace(static_cast<std::size_t>(n), 0);
  }

  int size() const noexcept { return n_; }
  bool has_leaders() const noexcept { return y_.has_value(); }

  int x(int i, int j) const { return x_.at(idx(i, j)); }
  void set_x(int i, int j, bool v) { x_.at(idx(i, j)) = v ? 1 : 0; }

  // Leader flags exist for j = 1..n-1 (0-based).
  int y(int j) const {
    check_leader(j);
    return (*y_)[static_cast<std::size_t>(j)];
  }
  void set_y(int j, bool v) {
    check_leader(j);
    (*y_)[static_cast<std::size_t>(j)] = v ? 1 : 0;
  }

  int value(const VarRef& v) const { return v.kind == VarKind::pair ? x(v.i, v.j) : y(v.j); }

  std::span<const std::uint8_t> pair_values() const noexcept { return x_; }

  friend bool operator==(const PairAssignment&, const PairAssignment&) = default;

 private:
  std::size_t idx(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) {
      throw ContractViolation("no pair variable for (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return pair_index(i, j, n_);
  }

  void check_leader(int j) const {
    if (!y_) throw ContractViolation("assignment has no leader variables");
    if (j < 1 || j >= n_) throw ContractViolation("no leader variable for element " + std::to_string(j));
  }

  int n_;
  std::vector<std::uint8_t> x_;
  std::optional<std::vector<std::uint8_t>> y_;
};

namespace detail {

inline std::string indexed_name(std::string_view stem, std::initializer_list<int> zero_based) {
  std::string out(stem);
  for (int v : zero_based) {
    out += '_';
    out += std::to_string(v + 1);
  }
  return out;
}

inline std::vector<VarRef> pair_variables(int n) {
  std::vector<VarRef> vars;
  vars.reserve(pair_count(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) vars.push_back(VarRef::pair(i, j));
  }
  return vars;
}

inline std::vector<ObjectiveTerm> pair_objective(const DistanceMatrix& dist) {
  std::vector<ObjectiveTerm> obj;
  obj.reserve(pair_count(dist.size()));
  const auto upper = dist.upper();
  std::size_t p = 0;
  for (int i = 0; i < dist.size(); ++i) {
    for (int j = i + 1; j < dist.size(); ++j) obj.push_back({upper[p++], VarRef::pair(i, j)});
  }
  return obj;
}

inline void add_triangle_rows(int n, std::vector<LinearConstraint>& rows) {
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const auto ij = VarRef::pair(i, j), ik = VarRef::pair(i, k), jk = VarRef::pair(j, k);
        rows.push_back({indexed_name("tri1", {i, j, k}), {{1, ij}, {1, jk}, {-1, ik}}, Sense::le, 1});
        rows.push_back({indexed_name("tri2", {i, j, k}), {{1, ij}, {1, ik}, {-1, jk}}, Sense::le, 1});
        rows.push_back({indexed_name("tri3", {i, j, k}), {{1, ik}, {1, jk}, {-1, ij}}, Sense::le, 1});
      }
    }
  }
}

// Partners of i in ascending order.
inline std::vector<Term> degree_terms(int n, int i) {
  std::vector<Term> terms;
  terms.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 0; j < n; ++j) {
    if (j != i) terms.push_back({1, VarRef::pair(i, j)});
  }
  return terms;
}

inline void add_degree_bounds(int n, int min_size, int max_size, std::vector<LinearConstraint>& rows) {
  for (int i = 0; i < n; ++i) {
    rows.push_back({indexed_name("dmin", {i}), degree_terms(n, i), Sense::ge, min_size - 1});
    rows.push_back({indexed_name("dmax", {i}), degree_terms(n, i), Sense::le, max_size - 1});
  }
}

inline std::size_t triangle_row_count(int n) {
  if (n < 3) return 0;
  const auto sn = static_cast<std::size_t>(n);
  return sn * (sn - 1) * (sn - 2) / 2;
}

}  // namespace detail

inline IlpModel build_equal(const Instance& instance) {
  const int n = instance.size();
  const int g = instance.groups();
  if (n % g != 0) {
    throw FormulationError("equal-size formulation inapplicable: N=" + std::to_string(n) +
                           " is not divisible by G=" + std::to_string(g));
  }
  std::vector<LinearConstraint> rows;
  rows.reserve(detail::triangle_row_count(n) + static_cast<std::size_t>(n));
  detail::add_triangle_rows(n, rows);
  for (int i = 0; i < n; ++i) {
    rows.push_back({detail::indexed_name("deq", {i}), detail::degree_terms(n, i), Sense::eq, n / g - 1});
  }
  return IlpModel(n, ModelVariant::equal, detail::pair_variables(n),
                  detail::pair_objective(instance.distances()), std::move(rows));
}

inline IlpModel build_degree_only(const Instance& instance) {
  const int n = instance.size();
  std::vector<LinearConstraint> rows;
  rows.reserve(detail::triangle_row_count(n) + 2 * static_cast<std::size_t>(n));
  detail::add_triangle_rows(n, rows);
  detail::add_degree_bounds(n, instance.min_size(), instance.max_size(), rows);
  return IlpModel(n, ModelVariant::degree_only, detail::pair_variables(n),
                  detail::pair_objective(instance.distances()), std::move(rows));
}

inline IlpModel build_unequal(const Instance& instance) {
  const int n = instance.size();
  std::vector<LinearConstraint> rows;
  rows.reserve(detail::triangle_row_count(n) + 2 * static_cast<std::size_t>(n) + pair_count(n) +
               static_cast<std::size_t>(n));
  detail::add_triangle_rows(n, rows);
  detail::add_degree_bounds(n, instance.min_size(), instance.max_size(), rows);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      rows.push_back({detail::indexed_name("lex", {i, j}),
                      {{1, VarRef::pair(i, j)}, {1, VarRef::leader(j)}},
                      Sense::le,
                      1});
    }
  }
  for (int j = 1; j < n; ++j) {
    std::vector<Term> terms;
    terms.reserve(static_cast<std::size_t>(j + 1));
    for (int i = 0; i < j; ++i) terms.push_back({1, VarRef::pair(i, j)});
    terms.push_back({1, VarRef::leader(j)});
    rows.push_back({detail::indexed_name("lforce", {j}), std::move(terms), Sense::ge, 1});
  }
  std::vector<Term> count;
  for (int j = 1; j < n; ++j) count.push_back({1, VarRef::leader(j)});
  rows.push_back({"lcount", std::move(count), Sense::eq, instance.groups() - 1});

  auto vars = detail::pair_variables(n);
  for (int j = 1; j < n; ++j) vars.push_back(VarRef::leader(j));
  return IlpModel(n, ModelVariant::unequal, std::move(vars), detail::pair_objective(instance.distances()),
                  std::move(rows));
}

inline IlpModel build_model(const Instance& instance, ModelVariant variant) {
  switch (variant) {
    case ModelVariant::equal: return build_equal(instance);
    case ModelVariant::unequal: return build_unequal(instance);
    case ModelVariant::degree_only: return build_degree_only(instance);
  }
  throw FormulationError("unknown model variant");
}

inline PairAssignment encode_grouping(const Grouping& grouping, ModelVariant variant) {
  const int n = grouping.size();
  PairAssignment asg(n, has_leader_variables(variant));
  const auto labels = grouping.labels();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) asg.set_x(i, j, true);
    }
  }
  if (asg.has_leaders()) {
    std::vector<char> seen(static_cast<std::size_t>(grouping.group_count()), 0);
    for (int j = 0; j < n; ++j) {
      auto& s = seen[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
      if (!s && j >= 1) asg.set_y(j, true);
      s = 1;
    }
  }
  return asg;
}

struct CheckReport {
  double objective = 0.0;
  std::vector<std::string> violated;

  bool ok() const noexcept { return violated.empty(); }
};

inline CheckReport check_assignment(const IlpModel& model, const PairAssignment& asg) {
  if (asg.size() != model.size()) {
    throw ContractViolation("assignment has " + std::to_string(asg.size()) + " elements, model has " +
                            std::to_string(model.size()));
  }
  if (asg.has_leaders() != has_leader_variables(model.variant())) {
    throw ContractViolation("assignment leader variables do not match the " +
                            std::string(to_string(model.variant())) + " model");
  }
  CheckReport report;
  for (const auto& t : model.objective()) {
    if (asg.value(t.var)) report.objective += t.coefficient;
  }
  for (const auto& c : model.constraints()) {
    long long lhs = 0;
    for (const auto& t : c.terms) lhs += static_cast<long long>(t.coefficient) * asg.value(t.var);
    if (!c.satisfied_by(lhs)) report.violated.push_back(c.name);
  }
  return report;
}

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Writes "<head> t1 + t2 - 3 t3 ..." wrapping every kTermsPerLine terms onto
// indented continuation lines, then the tail (sense and rhs).
template <typename Coef>
void write_row(std::string& out, const std::string& head,
               const std::vector<std::pair<Coef, std::string>>& terms, const std::string& tail) {
  constexpr std::size_t kTermsPerLine = 10;
  out += head;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& [coef, name] = terms[k];
    if (k > 0 && k % kTermsPerLine == 0) out += "\n   ";
    const bool negative = coef < 0;
    if (k == 0) {
      out += negative ? " - " : " ";
    } else {
      out += negative ? " - " : " + ";
    }
    Coef mag = negative ? -coef : coef;
    if (mag == Coef{}) mag = Coef{};  // no "-0"
    if (mag != 1) {
      if constexpr (std::is_floating_point_v<Coef>) {
        out += format_real(static_cast<double>(mag));
      } else {
        out += std::to_string(mag);
      }
      out += ' ';
    }
    out += name;
  }
  out += tail;
  out += '\n';
}

}  // namespace detail

// CPLEX LP text. Rows with no terms (possible only for N <= 1) are written
// as comments since the format has no empty-row syntax.
inline std::string export_lp(const IlpModel& model) {
  std::string out;
  out += "\\ maximally diverse grouping, ";
  out += to_string(model.variant());
  out += " model, N=" + std::to_string(model.size()) + "\n";

  out += "Maximize\n";
  std::vector<std::pair<double, std::string>> obj;
  obj.reserve(model.objective().size());
  for (const auto& t : model.objective()) obj.emplace_back(t.coefficient, t.var.name());
  if (obj.empty()) {
    out += " obj: 0\n";
  } else {
    detail::write_row(out, " obj:", obj, "");
  }

  out += "Subject To\n";
  for (const auto& c : model.constraints()) {
    const std::string tail = " " + std::string(to_string(c.sense)) + " " + std::to_string(c.rhs);
    if (c.terms.empty()) {
      out += "\\ " + c.name + ": empty row, 0" + tail + "\n";
      continue;
    }
    std::vector<std::pair<int, std::string>> terms;
    terms.reserve(c.terms.size());
    for (const auto& t : c.terms) terms.emplace_back(t.coefficient, t.var.name());
    detail::write_row(out, " " + c.name + ":", terms, tail);
  }

  out += "Binaries\n";
  const auto& vars = model.variables();
  for (std::size_t k = 0; k < vars.size(); ++k) {
    out += ' ';
    out += vars[k].name();
    if ((k + 1) % 10 == 0 || k + 1 == vars.size()) out += '\n';
  }
  out += "End\n";
  return out;
}

}  // namespace mdgp
