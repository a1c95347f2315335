#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "patqubo/error.hpp"
#include "patqubo/rng.hpp"
#include "patqubo/sat.hpp"

using namespace patqubo;

namespace {

Literal pos(Var v) { return {v, false}; }
Literal neg(Var v) { return {v, true}; }

Assignment bits(std::initializer_list<int> v) {
  Assignment x;
  for (int b : v) x.push_back(static_cast<std::uint8_t>(b));
  return x;
}

}  // namespace

TEST(Clause, RejectsRepeatedVariable) {
  EXPECT_THROW(Clause(pos(0), neg(0), pos(1)), InvalidClause);
}

TEST(ClauseType, CountsNegations) {
  EXPECT_EQ(clause_type(Clause(pos(0), pos(1), pos(2))), ClauseType::kType0);
  EXPECT_EQ(clause_type(Clause(pos(0), neg(1), pos(2))), ClauseType::kType1);
  EXPECT_EQ(clause_type(Clause(neg(0), neg(1), pos(2))), ClauseType::kType2);
  EXPECT_EQ(clause_type(Clause(neg(0), neg(1), neg(2))), ClauseType::kType3);
}

TEST(SortClause, Examples) {
  EXPECT_EQ(sort_clause(Clause(pos(0), neg(1), pos(2))), Clause(pos(0), pos(2), neg(1)));
  EXPECT_EQ(sort_clause(Clause(pos(0), pos(1), pos(2))), Clause(pos(0), pos(1), pos(2)));
  EXPECT_EQ(sort_clause(Clause(neg(4), pos(1), neg(6))), Clause(pos(1), neg(4), neg(6)));
}

TEST(SortClause, PreservesTypeAndTruth) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::set<Var> vars;
    while (vars.size() < 3) vars.insert(static_cast<Var>(rng.below(6)));
    std::vector<Var> v(vars.begin(), vars.end());
    std::array<bool, 3> negs{};
    for (auto& b : negs) b = rng.bernoulli(0.5);
    const Clause c({v[2], negs[0]}, {v[0], negs[1]}, {v[1], negs[2]});
    const Clause s = sort_clause(c);
    EXPECT_EQ(clause_type(s), clause_type(c));
    const std::size_t t = index_of(clause_type(s));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s[i].negated, i >= 3 - t);
    for (std::uint64_t m = 0; m < 64; ++m) {
      Assignment x(6);
      for (std::size_t i = 0; i < 6; ++i) x[i] = static_cast<std::uint8_t>((m >> i) & 1U);
      EXPECT_EQ(s.satisfied_by(x), c.satisfied_by(x));
    }
  }
}

TEST(CountSatisfied, Examples) {
  const Formula f(4, {Clause(pos(0), pos(1), pos(2)), Clause(pos(0), pos(1), pos(3))});
  EXPECT_EQ(count_satisfied(f, bits({1, 0, 0, 0})), 2u);
  EXPECT_EQ(count_satisfied(Formula(4, {Clause(pos(0), pos(1), pos(2))}), bits({0, 0, 0, 0})), 0u);
  EXPECT_EQ(count_satisfied(Formula(3, {Clause(neg(0), neg(1), neg(2))}), bits({1, 1, 1})), 0u);
}

TEST(CountSatisfied, IgnoresTrailingAuxiliaries) {
  const Formula f(3, {Clause(pos(0), pos(1), pos(2))});
  EXPECT_EQ(count_satisfied(f, bits({0, 0, 1, 1, 1})), 1u);
  EXPECT_THROW(count_satisfied(f, bits({0, 0})), InvalidInput);
}

TEST(MaxSat, SingleClauseWitnessIsLexicographicallyFirst) {
  const auto r = max_sat_bruteforce(Formula(3, {Clause(pos(0), pos(1), pos(2))}));
  EXPECT_EQ(r.satisfied, 1u);
  EXPECT_EQ(r.witness, bits({0, 0, 1}));
}

TEST(MaxSat, DuplicateAndComplementaryClauses) {
  const Clause c(pos(0), pos(1), pos(2));
  EXPECT_EQ(max_sat_bruteforce(Formula(3, {c, c})).satisfied, 2u);
  EXPECT_EQ(max_sat_bruteforce(Formula(3, {c, Clause(neg(0), neg(1), neg(2))})).satisfied, 2u);
}

TEST(MaxSat, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const Var n = static_cast<Var>(3 + rng.below(7));
    const Formula f = generate_uniform(n, 1 + rng.below(40), seed);
    const auto r = max_sat_bruteforce(f);
    EXPECT_EQ(r.satisfied, oracle::max_sat(oracle::to_int_clauses(f), n));
    EXPECT_EQ(count_satisfied(f, r.witness), r.satisfied);
  }
}

TEST(MaxSat, CapEnforced) {
  EXPECT_THROW(max_sat_bruteforce(generate_uniform(kMaxSatBruteforceCap + 1, 3, 1)),
               InfeasibleEnumeration);
}

TEST(Dimacs, ParsesWorkedExample) {
  const Formula f = parse_dimacs("p cnf 4 2\n1 2 3 0\n1 2 4 0\n");
  EXPECT_EQ(f, Formula(4, {Clause(pos(0), pos(1), pos(2)), Clause(pos(0), pos(1), pos(3))}));
}

TEST(Dimacs, NegatedSingleClause) {
  const Formula f = parse_dimacs("c comment\np cnf 3 1\n-1 -2 -3 0\n");
  ASSERT_EQ(f.num_clauses(), 1u);
  EXPECT_EQ(clause_type(f.clauses()[0]), ClauseType::kType3);
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 1 2 0\n"), InvalidClause);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 0\n"), UnsupportedClause);
  EXPECT_THROW(parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"), UnsupportedClause);
  EXPECT_THROW(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 x 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("p cnf 3 1\n1 2 5 0\n"), ParseError);
  EXPECT_THROW(parse_dimacs("1 2 3 0\n"), ParseError);
}

TEST(Dimacs, RoundTrip) {
  const Formula f = generate_uniform(20, 85, 4);
  std::stringstream ss;
  write_dimacs(ss, f);
  EXPECT_EQ(parse_dimacs(ss), f);
}

TEST(Generator, ShapesAndDeterminism) {
  const Formula a = generate_uniform(145, 500, 42);
  EXPECT_EQ(a.num_vars(), 145u);
  EXPECT_EQ(a.num_clauses(), 500u);
  EXPECT_EQ(a, generate_uniform(145, 500, 42));
  EXPECT_NE(a, generate_uniform(145, 500, 43));
  const Formula b = generate_uniform(298, 1000, 1);
  EXPECT_EQ(b.num_clauses(), 1000u);
}

TEST(Generator, MinimalInstance) {
  const Formula f = generate_uniform(3, 1, 9);
  std::set<Var> vars;
  for (const auto& l : f.clauses()[0].literals()) vars.insert(l.var);
  EXPECT_EQ(vars, (std::set<Var>{0, 1, 2}));
}

TEST(Generator, TooFewVariables) {
  EXPECT_THROW(generate_uniform(2, 1, 0), InvalidInput);
}

TEST(Generator, PolarityRoughlyBalanced) {
  const Formula f = generate_uniform(50, 4000, 7);
  std::size_t negs = 0;
  for (const auto& c : f.clauses())
    for (const auto& l : c.literals()) negs += l.negated ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(negs) / 12000.0, 0.5, 0.02);
}
