#include "satmdp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace satmdp::gen {

namespace {

std::vector<int> pick_distinct(CounterRng& rng, int v, int k, const std::vector<int>& occ, int b) {
  std::vector<int> pool;
  for (int x = 0; x < v; ++x)
    if (occ[static_cast<std::size_t>(x)] < b) pool.push_back(x);
  if (static_cast<int>(pool.size()) < k) return {};
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::optional<Planted> planted_formula(int v, int m, int b, double epsilon, std::uint64_t seed,
                                       double positive_fraction) {
  CounterRng rng(seed, 0x706c616e74);
  Assignment hidden(v);
  for (int i = 0; i < v; ++i) hidden.set(i, rng.bernoulli(0.5));
  if (std::none_of(hidden.bits().begin(), hidden.bits().end(), [](auto x) { return x > 0; }))
    hidden.set(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), true);

  // All-false satisfies exactly the clauses holding a negative literal.
  const int threshold = gap_threshold(epsilon, m);
  const int positives = std::max(m - threshold, static_cast<int>(std::ceil(positive_fraction * m)));
  std::vector<int> occ(static_cast<std::size_t>(v), 0);
  std::vector<Clause> clauses;
  for (int j = 0; j < m; ++j) {
    const bool all_positive = j < positives;
    Clause c;
    for (int attempt = 0; attempt < 200 && c.literals.empty(); ++attempt) {
      const auto vars = pick_distinct(rng, v, 3, occ, b);
      if (vars.empty()) return std::nullopt;
      std::vector<Literal> lits;
      for (int x : vars) lits.push_back({x, all_positive ? false : rng.bernoulli(0.5)});
      Clause cand{lits};
      if (clause_satisfied(cand, hidden)) c = cand;
    }
    if (c.literals.empty()) return std::nullopt;
    for (const auto& l : c.literals) ++occ[static_cast<std::size_t>(l.var)];
    clauses.push_back(std::move(c));
  }
  std::shuffle(clauses.begin(), clauses.end(), rng);
  return Planted{Formula(v, std::move(clauses)), hidden};
}

Planted planted_formula_retry(int v, int m, int b, double epsilon, std::uint64_t seed,
                              double positive_fraction) {
  for (std::uint64_t k = 0;; ++k)
    if (auto p = planted_formula(v, m, b, epsilon, CounterRng::mix(seed + k * 0x1000193), positive_fraction)) return *p;
}

Formula cube_formula(int groups, std::uint64_t seed) {
  CounterRng rng(seed, 0x63756265);
  const int v = 3 * groups;
  std::vector<int> perm(static_cast<std::size_t>(v));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Clause> clauses;
  for (int g = 0; g < groups; ++g)
    for (int pattern = 0; pattern < 8; ++pattern) {
      Clause c;
      for (int t = 0; t < 3; ++t)
        c.literals.push_back({perm[static_cast<std::size_t>(3 * g + t)], ((pattern >> t) & 1) != 0});
      std::shuffle(c.literals.begin(), c.literals.end(), rng);
      clauses.push_back(std::move(c));
    }
  std::shuffle(clauses.begin(), clauses.end(), rng);
  return Formula(v, std::move(clauses));
}

Planted cube_minus_one_formula(int groups, std::uint64_t seed) {
  CounterRng rng(seed, 0x6d696e7573);
  const int v = 3 * groups;
  std::vector<int> perm(static_cast<std::size_t>(v));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Assignment hidden(v);
  std::vector<Clause> clauses;
  for (int g = 0; g < groups; ++g) {
    const int solution = 1 + static_cast<int>(rng.below(7));  // bit t: variable t true
    for (int t = 0; t < 3; ++t) hidden.set(perm[static_cast<std::size_t>(3 * g + t)], ((solution >> t) & 1) != 0);
    for (int pattern = 0; pattern < 8; ++pattern) {
      // The clause with negation pattern `pattern` is falsified exactly by
      // the assignment whose true variables are `pattern`.
      if (pattern == solution) continue;
      Clause c;
      for (int t = 0; t < 3; ++t)
        c.literals.push_back({perm[static_cast<std::size_t>(3 * g + t)], ((pattern >> t) & 1) != 0});
      std::shuffle(c.literals.begin(), c.literals.end(), rng);
      clauses.push_back(std::move(c));
    }
  }
  std::shuffle(clauses.begin(), clauses.end(), rng);
  return Planted{Formula(v, std::move(clauses)), hidden};
}

Formula random_formula(int v, int m, int max_len, std::uint64_t seed) {
  CounterRng rng(seed, 0x72616e64);
  std::vector<Clause> clauses;
  const std::vector<int> no_limit(static_cast<std::size_t>(v), 0);
  for (int j = 0; j < m; ++j) {
    const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(max_len, v))));
    Clause c;
    for (int x : pick_distinct(rng, v, len, no_limit, 1)) c.literals.push_back({x, rng.bernoulli(0.5)});
    clauses.push_back(std::move(c));
  }
  return Formula(v, std::move(clauses));
}

}  // namespace satmdp::gen
