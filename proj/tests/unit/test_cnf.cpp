#include <gtest/gtest.h>

#include <sstream>

#include "satmdp/generators.hpp"
#include "satmdp/cnf.hpp"
#include "satmdp/errors.hpp"

using namespace satmdp;

namespace {

constexpr const char* kFiveClauseCnf =
    "c five variables a..e\n"
    "p cnf 5 5\n"
    "1 -2 3 0\n"
    "3 4 5 0\n"
    "1 4 5 0\n"
    "1 -2 -3 0\n"
    "1 -2 -5 0\n";

Formula five_clause() { return parse_dimacs(std::string_view(kFiveClauseCnf)); }

}  // namespace

TEST(Dimacs, ParsesSmallFormula) {
  const Formula f = five_clause();
  EXPECT_EQ(f.num_vars(), 5);
  EXPECT_EQ(f.num_clauses(), 5);
  EXPECT_TRUE(f.is_strict_3cnf());
  EXPECT_EQ(f.clause(0).literals[1], (Literal{1, true}));
  EXPECT_EQ(occurrence_bound(f), 4);
}

TEST(Dimacs, ClausesMaySpanLines) {
  const Formula f = parse_dimacs(std::string_view("p cnf 3 2\n1 -2\n 3 0 -1 2 3\n0\n"));
  ASSERT_EQ(f.num_clauses(), 2);
  EXPECT_EQ(f.clause(1).literals[0], (Literal{0, true}));
}

TEST(Dimacs, ErrorsCarryLineNumbers) {
  try {
    parse_dimacs(std::string_view("p cnf 3 1\n1 2 9 0\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_dimacs(std::string_view("1 2 3 0\n")), ParseError);
  EXPECT_THROW(parse_dimacs(std::string_view("p cnf 3 2\n1 2 3 0\n")), ParseError);
  EXPECT_THROW(parse_dimacs(std::string_view("p cnf 3 1\n1 2 x 0\n")), ParseError);
}

TEST(Dimacs, StrictModeRejectsShortClauses) {
  const std::string_view text = "p cnf 2 2\n1 0\n-1 2 0\n";
  EXPECT_THROW(parse_dimacs(text), ParseError);
  EXPECT_EQ(parse_dimacs(text, ParseMode::Lenient).num_clauses(), 2);
}

TEST(Dimacs, MissingFileNamesThePath) {
  try {
    read_dimacs_file("/nonexistent/dir/formula.cnf");
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/formula.cnf"), std::string::npos);
  }
}

TEST(Dimacs, RoundTripsRandomFormulas) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Formula f = gen::random_formula(6, 9, 3, seed);
    EXPECT_EQ(parse_dimacs(to_dimacs(f, "round trip"), ParseMode::Lenient), f) << "seed " << seed;
  }
}

TEST(Assignment, StringFormAndOrdering) {
  const Assignment a = Assignment::from_string("01101");
  EXPECT_EQ(a.to_string(), "01101");
  EXPECT_EQ(a[0], -1);
  EXPECT_TRUE(a.is_true(1));
  EXPECT_LT(Assignment::from_string("00111"), Assignment::from_string("01000"));
  EXPECT_EQ(hamming_distance(a, Assignment::from_string("11100")), 2);
}

TEST(VarSet, InsertEraseLowest) {
  VarSet s(70);
  EXPECT_EQ(s.lowest(), -1);
  s.insert(65);
  s.insert(3);
  s.insert(3);
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.lowest(), 3);
  s.erase(3);
  EXPECT_EQ(s.members(), std::vector<int>{65});
  EXPECT_EQ(VarSet(5, true).size(), 5);
}

TEST(SatCount, FiveClauseAssignments) {
  const Formula f = five_clause();
  EXPECT_EQ(satisfied_count(f, Assignment::from_string("01000")), 2);
  EXPECT_EQ(satisfied_count(f, Assignment::from_string("01111")), 3);
}

TEST(BruteForce, FiveClauseSatisfiers) {
  const Formula f = five_clause();
  const auto w = brute_force_sat(f);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->to_string(), "00001");
  EXPECT_EQ(brute_force_max_sat(f).count, 5);
}

TEST(BruteForce, ContradictionMaxSat) {
  const Formula f = parse_dimacs(std::string_view("p cnf 1 2\n1 0\n-1 0\n"), ParseMode::Lenient);
  EXPECT_FALSE(brute_force_sat(f));
  EXPECT_EQ(brute_force_max_sat(f).count, 1);
}

TEST(BruteForce, RefusesAboveLimit) {
  const Formula f = gen::random_formula(30, 30, 3, 1);
  EXPECT_THROW(brute_force_sat(f), RefusalError);
  EXPECT_THROW(brute_force_max_sat(f, 10), RefusalError);
}

TEST(BruteForce, MaxSatDominatesEveryAssignment) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Formula f = gen::random_formula(7, 20, 3, seed);
    const auto best = brute_force_max_sat(f);
    EXPECT_EQ(satisfied_count(f, best.witness), best.count);
    CounterRng rng(seed);
    for (int t = 0; t < 20; ++t) {
      Assignment a(7);
      for (int i = 0; i < 7; ++i) a.set(i, rng.bernoulli(0.5));
      EXPECT_LE(satisfied_count(f, a), best.count);
    }
    EXPECT_EQ(brute_force_sat(f).has_value(), best.count == f.num_clauses());
  }
}

TEST(GapThreshold, FloorOfFraction) {
  EXPECT_EQ(gap_threshold(0.25, 5), 3);
  EXPECT_EQ(gap_threshold(1.0 / 3.0, 3), 2);
  EXPECT_EQ(gap_threshold(0.125, 8), 7);
  EXPECT_EQ(gap_threshold(0.1, 10), 9);
}

TEST(EligibleClause, RequiresAllVariablesFree) {
  const Formula f = five_clause();
  const Assignment w = Assignment::from_string("01000");
  VarSet free(5, true);
  EXPECT_EQ(first_eligible_clause(f, w, free), 0);
  free.erase(2);  // clause 1 mentions c
  EXPECT_EQ(first_eligible_clause(f, w, free), 2);
  free.erase(4);
  EXPECT_EQ(first_eligible_clause(f, w, free), std::nullopt);
}

TEST(Formula, RejectsMalformedClauses) {
  EXPECT_THROW(Formula(2, {Clause{{{0, false}, {5, false}}}}), ParameterError);
  EXPECT_THROW(Formula(2, {}), ParameterError);
  EXPECT_THROW(Formula(4, {Clause{{{0, false}, {1, false}, {2, false}, {3, false}}}}), ParameterError);
}
