#pragma once

// Plain-text instance and solution files.
//
// Instance:
//   N G a b
//   DIST                        | ATTR K
//   d_12 d_13 ... d_1N          | num cat ...        (K schema kinds)
//   d_23 ... d_2N               | <K values>          (N rows)
//   ...  (N-1 rows)             | ...
// Lines starting with '#' and blank lines are ignored.
//
// Solution: one group per line, 1-based element indices.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdgp/core.hpp"
#include "mdgp/rng.hpp"

namespace mdgp {

struct ParsedInstance {
  Instance instance;
  std::optional<AttributeTable> attributes;
  bool has_negative_distances = false;
};

namespace detail {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

// Non-comment, non-blank lines split on whitespace; views point into `text`.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty() && line.tokens.front().front() != '#') lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

template <typename T>
T parse_number(std::string_view tok, int line, std::string_view what) {
  T value{};
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected " + std::string(what) + ", got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace detail

// `metric` applies to ATTR bodies only.
inline ParsedInstance parse_instance(std::string_view text, Metric metric = Metric::gower) {
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty instance file");

  const auto& header = lines[0];
  if (header.tokens.size() != 4) throw ParseError(header.number, "header must be 'N G a b'");
  const int n = detail::parse_number<int>(header.tokens[0], header.number, "integer N");
  const int groups = detail::parse_number<int>(header.tokens[1], header.number, "integer G");
  const int a = detail::parse_number<int>(header.tokens[2], header.number, "integer a");
  const int b = detail::parse_number<int>(header.tokens[3], header.number, "integer b");
  check_instance_shape(n, groups, a, b);

  if (lines.size() < 2) throw ParseError(header.number + 1, "missing DIST or ATTR section");
  const auto& section = lines[1];
  const auto keyword = section.tokens[0];

  if (keyword == "DIST") {
    if (section.tokens.size() != 1) throw ParseError(section.number, "DIST takes no arguments");
    if (lines.size() != static_cast<std::size_t>(n + 1)) {
      const int at = lines.size() > static_cast<std::size_t>(n + 1) ? lines[static_cast<std::size_t>(n + 1)].number
                                                                     : lines.back().number + 1;
      throw ParseError(at, "DIST section needs exactly " + std::to_string(n - 1) + " rows");
    }
    std::vector<double> upper;
    upper.reserve(pair_count(n));
    for (int i = 0; i < n - 1; ++i) {
      const auto& row = lines[static_cast<std::size_t>(i + 2)];
      if (row.tokens.size() != static_cast<std::size_t>(n - i - 1)) {
        throw ParseError(row.number, "DIST row " + std::to_string(i + 1) + " needs " +
                                         std::to_string(n - i - 1) + " values, got " +
                                         std::to_string(row.tokens.size()));
      }
      for (auto tok : row.tokens) {
        const double v = detail::parse_number<double>(tok, row.number, "real distance");
        if (!std::isfinite(v)) throw ParseError(row.number, "distance must be finite");
        upper.push_back(v);
      }
    }
    DistanceMatrix dist(n, std::move(upper));
    const bool negative = dist.has_negative();
    return ParsedInstance{Instance(std::move(dist), groups, a, b), std::nullopt, negative};
  }

  if (keyword == "ATTR") {
    if (section.tokens.size() != 2) throw ParseError(section.number, "expected 'ATTR K'");
    const int k = detail::parse_number<int>(section.tokens[1], section.number, "attribute count K");
    if (k < 1) throw ParseError(section.number, "K must be at least 1");
    if (lines.size() < 3) throw ParseError(section.number + 1, "missing schema line");
    const auto& schema_line = lines[2];
    if (schema_line.tokens.size() != static_cast<std::size_t>(k)) {
      throw ParseError(schema_line.number, "schema needs " + std::to_string(k) + " kinds");
    }
    std::vector<AttributeKind> schema;
    for (auto tok : schema_line.tokens) {
      if (tok == "num") {
        schema.push_back(AttributeKind::numeric);
      } else if (tok == "cat") {
        schema.push_back(AttributeKind::categorical);
      } else {
        throw ParseError(schema_line.number, "schema kind must be 'num' or 'cat', got '" + std::string(tok) + "'");
      }
    }
    if (lines.size() != static_cast<std::size_t>(n + 3)) {
      const int at = lines.size() > static_cast<std::size_t>(n + 3) ? lines[static_cast<std::size_t>(n + 3)].number
                                                                     : lines.back().number + 1;
      throw ParseError(at, "ATTR section needs exactly " + std::to_string(n) + " rows");
    }
    std::vector<std::vector<AttributeValue>> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& row = lines[static_cast<std::size_t>(i + 3)];
      if (row.tokens.size() != static_cast<std::size_t>(k)) {
        throw ParseError(row.number, "attribute row needs " + std::to_string(k) + " values");
      }
      std::vector<AttributeValue> values;
      for (int c = 0; c < k; ++c) {
        const auto tok = row.tokens[static_cast<std::size_t>(c)];
        if (schema[static_cast<std::size_t>(c)] == AttributeKind::numeric) {
          const double v = detail::parse_number<double>(tok, row.number, "numeric attribute");
          if (!std::isfinite(v)) throw ParseError(row.number, "numeric attribute must be finite");
          values.emplace_back(v);
        } else {
          values.emplace_back(std::string(tok));
        }
      }
      rows.push_back(std::move(values));
    }
    AttributeTable table(std::move(schema), std::move(rows));
    auto dist = distance_matrix(table, metric);
    const bool negative = dist.has_negative();
    return ParsedInstance{Instance(std::move(dist), groups, a, b), std::move(table), negative};
  }

  throw ParseError(section.number, "expected DIST or ATTR, got '" + std::string(keyword) + "'");
}

struct GeneratorKind {
  enum class Shape { uniform1d, uniform_kd, mixed };

  Shape shape = Shape::uniform1d;
  int numeric = 1;      // uniform_kd: dimensions; mixed: numeric columns
  int categorical = 0;  // mixed only

  static GeneratorKind uniform1d() { return {Shape::uniform1d, 1, 0}; }
  static GeneratorKind uniform_kd(int k) { return {Shape::uniform_kd, k, 0}; }
  static GeneratorKind mixed(int num, int cat) { return {Shape::mixed, num, cat}; }
};

// Seeded ATTR instance: numeric values uniform in [0, 100] with six decimals,
// categorical labels drawn from {a, b, c, d}.
inline std::string gen_instance(int n, int groups, int a, int b, const GeneratorKind& kind, std::uint64_t seed) {
  check_instance_shape(n, groups, a, b);
  if (kind.numeric < 0 || kind.categorical < 0 || kind.numeric + kind.categorical < 1) {
    throw InvalidInstance("generator needs at least one attribute");
  }
  const int width = kind.numeric + kind.categorical;

  SplitMix64 rng(seed);
  std::string out = std::to_string(n) + " " + std::to_string(groups) + " " + std::to_string(a) + " " +
                    std::to_string(b) + "\n";
  out += "ATTR " + std::to_string(width) + "\n";
  for (int c = 0; c < width; ++c) {
    if (c) out += ' ';
    out += c < kind.numeric ? "num" : "cat";
  }
  out += '\n';
  char buf[32];
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < width; ++c) {
      if (c) out += ' ';
      if (c < kind.numeric) {
        std::snprintf(buf, sizeof buf, "%.6f", 100.0 * rng.unit());
        out += buf;
      } else {
        out += static_cast<char>('a' + rng.below(4));
      }
    }
    out += '\n';
  }
  return out;
}

// Groups in canonical order, 1-based indices, one group per line.
inline std::string format_solution(const Grouping& grouping) {
  std::string out;
  for (const auto& members : canonicalize(grouping).groups()) {
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(members[k] + 1);
    }
    out += '\n';
  }
  return out;
}

// Every element 1..n must appear exactly once.
inline Grouping parse_solution(std::string_view text, int n) {
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  int group = 0;
  for (const auto& line : detail::tokenize(text)) {
    for (auto tok : line.tokens) {
      int e = 0;
      try {
        e = detail::parse_number<int>(tok, line.number, "element index");
      } catch (const ParseError& err) {
        throw VerificationError(err.what());
      }
      if (e < 1 || e > n) {
        throw VerificationError("line " + std::to_string(line.number) + ": element " + std::to_string(e) +
                                " out of range 1.." + std::to_string(n));
      }
      auto& l = labels[static_cast<std::size_t>(e - 1)];
      if (l != -1) {
        throw VerificationError("line " + std::to_string(line.number) + ": element " + std::to_string(e) +
                                " appears more than once");
      }
      l = group;
    }
    ++group;
  }
  for (int i = 0; i < n; ++i) {
    if (labels[static_cast<std::size_t>(i)] == -1) {
      throw VerificationError("element " + std::to_string(i + 1) + " is not assigned to any group");
    }
  }
  return Grouping(std::move(labels));
}

}  // namespace mdgp
