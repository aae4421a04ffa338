#pragma once

#include <cstdint>
#include <optional>

#include "satmdp/cnf.hpp"
#include "satmdp/rng.hpp"

namespace satmdp::gen {

// Strict 3-CNF with distinct variables per clause, every clause satisfied by
// a hidden random assignment, each variable in at most b clauses, and enough
// all-positive clauses that the all-false start satisfies at most
// floor((1 - epsilon) m) clauses; at least ceil(positive_fraction m) clauses
// are all-positive. Returns nullopt when the occurrence bound cannot be met
// for this seed.
struct Planted {
  Formula formula;
  Assignment hidden;
};
std::optional<Planted> planted_formula(int v, int m, int b, double epsilon, std::uint64_t seed,
                                       double positive_fraction = 0.0);

// Like planted_formula but retries seeds until it succeeds.
Planted planted_formula_retry(int v, int m, int b, double epsilon, std::uint64_t seed,
                              double positive_fraction = 0.0);

// `groups` disjoint variable triples, each carrying all 8 sign patterns
// (so exactly one clause per triple fails under any assignment), relabelled
// and shuffled. v = 3 groups, m = 8 groups, max-sat = 7 groups, and every
// variable occurs in 8 clauses.
Formula cube_formula(int groups, std::uint64_t seed);

// `groups` disjoint triples, each carrying the 7 sign patterns satisfied by a
// planted per-triple assignment with at least one true variable. The planted
// assignment is the unique satisfying one, the unsatisfied-clause count
// equals the number of triples that differ from it, and every variable
// occurs in 7 clauses. v = 3 groups, m = 7 groups.
Planted cube_minus_one_formula(int groups, std::uint64_t seed);

// Clauses of 1..max_len literals over distinct variables, uniform signs.
Formula random_formula(int v, int m, int max_len, std::uint64_t seed);

}  // namespace satmdp::gen
