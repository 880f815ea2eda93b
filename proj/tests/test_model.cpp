#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "mdgp/demonstrate.hpp"
#include "mdgp/model.hpp"
#include "test_support.hpp"

using namespace mdgp;

namespace {

std::size_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t count_prefix(const IlpModel& m, std::string_view prefix) {
  return static_cast<std::size_t>(std::count_if(m.constraints().begin(), m.constraints().end(), [&](const auto& c) {
    return c.name.rfind(prefix, 0) == 0;
  }));
}

const auto kWorkedOptimum = Grouping::from_one_based({{1, 5}, {2, 4}, {3, 6}});
const auto kTwoGroups = Grouping::from_one_based({{1, 3, 6}, {2, 4, 5}});

}  // namespace

TEST_CASE("unequal model on the counterexample has the expected rows", "[model]") {
  const auto m = build_unequal(counterexample_instance());
  const auto leaders = std::count_if(m.variables().begin(), m.variables().end(),
                                     [](const VarRef& v) { return v.kind == VarKind::leader; });
  CHECK(m.variables().size() == 20);
  CHECK(leaders == 5);
  CHECK(count_prefix(m, "tri") == 60);
  CHECK(count_prefix(m, "dmin") + count_prefix(m, "dmax") == 12);
  CHECK(count_prefix(m, "lex") == 15);
  CHECK(count_prefix(m, "lforce") == 5);
  CHECK(count_prefix(m, "lcount") == 1);
  CHECK(m.constraints().size() == 93);
  CHECK(m.variant() == ModelVariant::unequal);
}

TEST_CASE("triangle rows complete the transitivity triple", "[model]") {
  const Instance inst(DistanceMatrix(3), 1, 3, 3);
  const auto m = build_equal(inst);
  REQUIRE(count_prefix(m, "tri") == 3);
  const auto x12 = VarRef::pair(0, 1), x13 = VarRef::pair(0, 2), x23 = VarRef::pair(1, 2);
  const auto* t1 = m.find("tri1_1_2_3");
  const auto* t2 = m.find("tri2_1_2_3");
  const auto* t3 = m.find("tri3_1_2_3");
  REQUIRE(t1);
  REQUIRE(t2);
  REQUIRE(t3);
  CHECK(t1->terms == std::vector<Term>{{1, x12}, {1, x23}, {-1, x13}});
  CHECK(t2->terms == std::vector<Term>{{1, x12}, {1, x13}, {-1, x23}});
  CHECK(t3->terms == std::vector<Term>{{1, x13}, {1, x23}, {-1, x12}});
  for (const auto* t : {t1, t2, t3}) {
    CHECK(t->sense == Sense::le);
    CHECK(t->rhs == 1);
  }
}

TEST_CASE("leader rows use the later index", "[model]") {
  const auto m = build_unequal(counterexample_instance());
  const auto* lex = m.find("lex_1_5");
  REQUIRE(lex);
  CHECK(lex->terms == std::vector<Term>{{1, VarRef::pair(0, 4)}, {1, VarRef::leader(4)}});
  const auto* force = m.find("lforce_3");
  REQUIRE(force);
  CHECK(force->terms ==
        std::vector<Term>{{1, VarRef::pair(0, 2)}, {1, VarRef::pair(1, 2)}, {1, VarRef::leader(2)}});
  CHECK(force->sense == Sense::ge);
  const auto* count = m.find("lcount");
  REQUIRE(count);
  CHECK(count->rhs == 2);
  CHECK(count->sense == Sense::eq);
}

TEST_CASE("equal model degree rows", "[model]") {
  const auto six_three = build_equal(Instance(DistanceMatrix(6), 3, 2, 2));
  CHECK(six_three.variables().size() == 15);
  CHECK(six_three.constraints().size() == 66);
  for (int i = 1; i <= 6; ++i) {
    const auto* row = six_three.find("deq_" + std::to_string(i));
    REQUIRE(row);
    CHECK(row->rhs == 1);
    CHECK(row->sense == Sense::eq);
    CHECK(row->terms.size() == 5);
  }
  const auto six_two = build_equal(Instance(DistanceMatrix(6), 2, 3, 3));
  CHECK(six_two.find("deq_4")->rhs == 2);

  CHECK_THROWS_AS(build_equal(Instance(DistanceMatrix(5), 2, 2, 3)), FormulationError);
  CHECK_THROWS_WITH(build_equal(Instance(DistanceMatrix(5), 2, 2, 3)),
                    Catch::Matchers::ContainsSubstring("equal-size formulation inapplicable"));
}

TEST_CASE("degree-only model", "[model]") {
  const auto inst = counterexample_instance();
  const auto m = build_degree_only(inst);
  CHECK(m.variables().size() == 15);
  CHECK(m.constraints().size() == 72);

  const auto relaxed = check_assignment(m, encode_grouping(kTwoGroups, ModelVariant::degree_only));
  CHECK(relaxed.ok());
  CHECK(relaxed.objective == 16.0);

  const auto strict = check_assignment(build_unequal(inst), encode_grouping(kTwoGroups, ModelVariant::unequal));
  CHECK(strict.objective == 16.0);
  CHECK(strict.violated == std::vector<std::string>{"lcount"});
}

TEST_CASE("model sizes follow the closed forms", "[model][property]") {
  for (int n = 3; n <= 10; ++n) {
    const auto pairs = choose(static_cast<std::size_t>(n), 2);
    const auto triangles = 3 * choose(static_cast<std::size_t>(n), 3);
    const auto sn = static_cast<std::size_t>(n);
    const Instance inst(DistanceMatrix(n), 1, 1, n);
    CHECK(build_equal(inst).variables().size() == pairs);
    CHECK(build_equal(inst).constraints().size() == triangles + sn);
    CHECK(build_degree_only(inst).variables().size() == pairs);
    CHECK(build_degree_only(inst).constraints().size() == triangles + 2 * sn);
    CHECK(build_unequal(inst).variables().size() == pairs + sn - 1);
    CHECK(build_unequal(inst).constraints().size() == triangles + 2 * sn + pairs + (sn - 1) + 1);
  }
}

TEST_CASE("encode_grouping sets pair and leader indicators", "[model][encode]") {
  const auto asg = encode_grouping(kWorkedOptimum, ModelVariant::unequal);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const bool together = (i == 0 && j == 4) || (i == 1 && j == 3) || (i == 2 && j == 5);
      CHECK(asg.x(i, j) == (together ? 1 : 0));
    }
  }
  CHECK(asg.y(1) == 1);
  CHECK(asg.y(2) == 1);
  CHECK(asg.y(3) == 0);
  CHECK(asg.y(4) == 0);
  CHECK(asg.y(5) == 0);
  CHECK_THROWS_AS(asg.y(0), ContractViolation);

  const auto singles = encode_grouping(Grouping({0, 1, 2, 3}), ModelVariant::unequal);
  const auto one = encode_grouping(Grouping({0, 0, 0, 0}), ModelVariant::unequal);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      CHECK(singles.x(i, j) == 0);
      CHECK(one.x(i, j) == 1);
    }
  }
  for (int j = 1; j < 4; ++j) {
    CHECK(singles.y(j) == 1);
    CHECK(one.y(j) == 0);
  }
  CHECK_FALSE(encode_grouping(kWorkedOptimum, ModelVariant::equal).has_leaders());
}

TEST_CASE("check_assignment on the counterexample", "[model][check]") {
  const auto inst = counterexample_instance();
  const auto m = build_unequal(inst);

  const auto opt = check_assignment(m, encode_grouping(kWorkedOptimum, ModelVariant::unequal));
  CHECK(opt.ok());
  CHECK(opt.objective == 9.0);

  const auto zero = check_assignment(m, PairAssignment(6, true));
  for (int i = 1; i <= 6; ++i) {
    CHECK(std::find(zero.violated.begin(), zero.violated.end(), "dmin_" + std::to_string(i)) != zero.violated.end());
  }

  CHECK_THROWS_AS(check_assignment(m, PairAssignment(6, false)), ContractViolation);
  CHECK_THROWS_AS(check_assignment(m, PairAssignment(5, true)), ContractViolation);
  CHECK_THROWS_AS(check_assignment(build_degree_only(inst), PairAssignment(6, true)), ContractViolation);
}

TEST_CASE("soundness and completeness of the unequal model", "[model][property]") {
  for (int n = 1; n <= 7; ++n) {
    const auto groupings = testing::all_groupings(n);
    for (const auto& [g, a, b] : testing::feasible_shapes(n)) {
      const Instance inst(testing::random_distances(n, static_cast<std::uint64_t>(n * 100 + g * 10 + a)), g, a, b);
      const auto m = build_unequal(inst);
      for (const auto& grouping : groupings) {
        const auto check = check_assignment(m, encode_grouping(grouping, ModelVariant::unequal));
        const bool feasible = validate_grouping(grouping, inst).feasible;
        CHECK(check.ok() == feasible);
        if (feasible) CHECK(check.objective == objective_value(grouping, inst.distances()));
      }
    }
  }
}

TEST_CASE("export_lp names variables and rows deterministically", "[model][lp]") {
  const auto lp3 = export_lp(build_equal(Instance(DistanceMatrix(3), 1, 3, 3)));
  const auto parsed3 = testing::parse_lp(lp3);
  CHECK(parsed3.binaries == std::vector<std::string>{"x_1_2", "x_1_3", "x_2_3"});
  CHECK(lp3.find("Maximize\n") != std::string::npos);
  CHECK(lp3.find("Subject To\n") != std::string::npos);
  CHECK(lp3.find("Binaries\n") != std::string::npos);
  CHECK(lp3.rfind("End\n") == lp3.size() - 4);

  const auto lp = export_lp(build_unequal(counterexample_instance()));
  CHECK(lp.find("\n lcount: y_2 + y_3 + y_4 + y_5 + y_6 = 2\n") != std::string::npos);
  CHECK(lp.find("\n tri1_1_2_3: x_1_2 + x_2_3 - x_1_3 <= 1\n") != std::string::npos);
  CHECK(lp.find("\n lex_1_2: x_1_2 + y_2 <= 1\n") != std::string::npos);
  CHECK(lp == export_lp(build_unequal(counterexample_instance())));
}

TEST_CASE("export_lp round-trips through an independent reader", "[model][lp][property]") {
  for (int n : {1, 2, 3, 5, 8, 13}) {
    const auto dist = testing::random_distances(n, static_cast<std::uint64_t>(n), -5.0, 50.0);
    const int g = std::max(1, n / 3);
    const Instance inst(dist, g, 1, n);
    for (auto variant : {ModelVariant::unequal, ModelVariant::degree_only}) {
      const auto model = build_model(inst, variant);
      const auto lp = testing::parse_lp(export_lp(model));
      CHECK(lp.objective_sense == "Maximize");

      std::vector<std::string> names;
      for (const auto& v : model.variables()) names.push_back(v.name());
      CHECK(lp.binaries == names);

      REQUIRE(lp.objective.size() == model.objective().size());
      for (std::size_t k = 0; k < lp.objective.size(); ++k) {
        CHECK(lp.objective[k].first == model.objective()[k].coefficient);
        CHECK(lp.objective[k].second == model.objective()[k].var.name());
      }

      std::vector<const LinearConstraint*> nonempty;
      for (const auto& c : model.constraints()) {
        if (!c.terms.empty()) nonempty.push_back(&c);
      }
      REQUIRE(lp.rows.size() == nonempty.size());
      for (std::size_t r = 0; r < lp.rows.size(); ++r) {
        const auto& c = *nonempty[r];
        CHECK(lp.rows[r].name == c.name);
        CHECK(lp.rows[r].sense == to_string(c.sense));
        CHECK(lp.rows[r].rhs == c.rhs);
        REQUIRE(lp.rows[r].terms.size() == c.terms.size());
        for (std::size_t t = 0; t < c.terms.size(); ++t) {
          CHECK(lp.rows[r].terms[t].first == c.terms[t].coefficient);
          CHECK(lp.rows[r].terms[t].second == c.terms[t].var.name());
        }
      }
    }
  }
}
