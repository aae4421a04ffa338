#pragma once

#include <optional>
#include <vector>

#include "satmdp/cnf.hpp"

namespace satmdp {

struct TransformResult {
  Formula formula;
  // For each output variable: the input variable it copies, or -1 for a
  // padding variable of a consistency clause pair.
  std::vector<int> origin;
  // Input variables that were split into per-occurrence copies.
  std::vector<int> split_vars;
};

// Largest output/input clause-count ratio the construction can produce:
// every split occurrence adds two consistency clauses and a clause holds at
// most three occurrences, so |out| <= 7 |in|.
inline constexpr double kTransformSizeConstant = 7.0;

// Variables occurring in more than b clauses are replaced by one copy per
// occurrence; copies are tied by the implication cycle x_1 -> x_2 -> ... ->
// x_k -> x_1, each implication written as (~x_i | x_{i+1} | z) & (~x_i |
// x_{i+1} | ~z) with a fresh z. Copies occur in 5 clauses, so splitting
// requires b >= 5. Formulas already within the bound are returned unchanged.
TransformResult bounded_occurrence_transform_full(const Formula& f, int b);
Formula bounded_occurrence_transform(const Formula& f, int b);

// Max-SAT of a transform output. Each padding variable sits in a
// complementary clause pair whose joint count does not depend on it, so it
// is fixed to false and only the remaining variables are enumerated.
MaxSatResult transformed_max_sat(const TransformResult& t, int limit = kDefaultExhaustiveLimit);

enum class PromiseKind { Satisfiable, GapUnsatisfiable, PromiseViolated };

struct PromiseStatus {
  PromiseKind kind = PromiseKind::PromiseViolated;
  int max_count = 0;
  int threshold = 0;  // floor((1 - epsilon) m)
};

const char* to_string(PromiseKind k);

// Satisfiable, or max-sat <= (1 - epsilon) m (boundary included), or neither.
PromiseStatus check_gap_promise(const Formula& f, double epsilon, int limit = kDefaultExhaustiveLimit);

struct GapInstance {
  Formula formula;
  int b;
  double epsilon;
};

// Validates occurrence_bound <= b, m >= v and epsilon in (0, 1).
GapInstance make_gap_instance(Formula f, int b, double epsilon);

}  // namespace satmdp
