#include "satmdp/gapsat.hpp"

#include <algorithm>

#include "satmdp/errors.hpp"

namespace satmdp {

TransformResult bounded_occurrence_transform_full(const Formula& f, int b) {
  if (b < 3) throw ParameterError("occurrence bound b must be at least 3");
  const int v = f.num_vars();
  std::vector<bool> split(static_cast<std::size_t>(v), false);
  std::vector<int> split_vars;
  for (int x = 0; x < v; ++x)
    if (static_cast<int>(f.occurrences(x).size()) > b) {
      split[static_cast<std::size_t>(x)] = true;
      split_vars.push_back(x);
    }
  if (split_vars.empty()) {
    std::vector<int> origin(static_cast<std::size_t>(v));
    for (int x = 0; x < v; ++x) origin[static_cast<std::size_t>(x)] = x;
    return {f, std::move(origin), {}};
  }
  if (b < 5) throw ParameterError("the cycle gadget places each copy in 5 clauses; splitting needs b >= 5");

  // Unsplit variables keep their relative order, then copies per split
  // variable in occurrence order, then padding variables.
  std::vector<int> origin;
  std::vector<int> renamed(static_cast<std::size_t>(v), -1);
  for (int x = 0; x < v; ++x)
    if (!split[static_cast<std::size_t>(x)]) {
      renamed[static_cast<std::size_t>(x)] = static_cast<int>(origin.size());
      origin.push_back(x);
    }
  // copy_of[x][k] is the copy used by the k-th clause containing x.
  std::vector<std::vector<int>> copy_of(static_cast<std::size_t>(v));
  for (int x : split_vars) {
    for (std::size_t k = 0; k < f.occurrences(x).size(); ++k) {
      copy_of[static_cast<std::size_t>(x)].push_back(static_cast<int>(origin.size()));
      origin.push_back(x);
    }
  }

  std::vector<Clause> out;
  for (int j = 0; j < f.num_clauses(); ++j) {
    Clause c;
    for (const auto& l : f.clause(j).literals) {
      int nv;
      if (split[static_cast<std::size_t>(l.var)]) {
        const auto occ = f.occurrences(l.var);
        const auto pos = std::lower_bound(occ.begin(), occ.end(), j) - occ.begin();
        nv = copy_of[static_cast<std::size_t>(l.var)][static_cast<std::size_t>(pos)];
      } else {
        nv = renamed[static_cast<std::size_t>(l.var)];
      }
      c.literals.push_back({nv, l.negated});
    }
    out.push_back(std::move(c));
  }
  for (int x : split_vars) {
    const auto& cp = copy_of[static_cast<std::size_t>(x)];
    const std::size_t k = cp.size();
    for (std::size_t i = 0; i < k; ++i) {
      const int a = cp[i], nxt = cp[(i + 1) % k];
      const int z = static_cast<int>(origin.size());
      origin.push_back(-1);
      out.push_back(Clause{{{a, true}, {nxt, false}, {z, false}}});
      out.push_back(Clause{{{a, true}, {nxt, false}, {z, true}}});
    }
  }
  const int nv = static_cast<int>(origin.size());
  return {Formula(nv, std::move(out)), std::move(origin), std::move(split_vars)};
}

Formula bounded_occurrence_transform(const Formula& f, int b) {
  return bounded_occurrence_transform_full(f, b).formula;
}

MaxSatResult transformed_max_sat(const TransformResult& t, int limit) {
  std::vector<int> keep;
  for (std::size_t i = 0; i < t.origin.size(); ++i)
    if (t.origin[i] >= 0) keep.push_back(static_cast<int>(i));
  const int n = static_cast<int>(keep.size());
  if (n > limit)
    throw RefusalError("exhaustive search over " + std::to_string(n) + " variables exceeds the limit of " +
                       std::to_string(limit));
  std::vector<int> pos(t.origin.size(), -1);
  for (int k = 0; k < n; ++k) pos[static_cast<std::size_t>(keep[static_cast<std::size_t>(k)])] = k;
  // Padding literals are constant under z = false: positive is false, negated true.
  struct Masks {
    std::uint32_t pos = 0, neg = 0;
    bool always = false;
  };
  std::vector<Masks> cls;
  for (const auto& c : t.formula.clauses()) {
    Masks m;
    for (const auto& l : c.literals) {
      const int p = pos[static_cast<std::size_t>(l.var)];
      if (p < 0) {
        m.always |= l.negated;
        continue;
      }
      (l.negated ? m.neg : m.pos) |= std::uint32_t{1} << (n - 1 - p);
    }
    cls.push_back(m);
  }
  const int m = static_cast<int>(cls.size());
  int best = -1;
  std::uint32_t arg = 0;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t mask64 = 0; mask64 < end; ++mask64) {
    const auto mask = static_cast<std::uint32_t>(mask64);
    int cnt = 0;
    for (const auto& c : cls) cnt += c.always || ((mask & c.pos) | (~mask & c.neg)) != 0;
    if (cnt > best) {
      best = cnt;
      arg = mask;
      if (best == m) break;
    }
  }
  Assignment w(t.formula.num_vars(), -1);
  for (int k = 0; k < n; ++k) w.set(keep[static_cast<std::size_t>(k)], (arg >> (n - 1 - k)) & 1U);
  return {best, std::move(w)};
}

const char* to_string(PromiseKind k) {
  switch (k) {
    case PromiseKind::Satisfiable: return "satisfiable";
    case PromiseKind::GapUnsatisfiable: return "gap_unsatisfiable";
    case PromiseKind::PromiseViolated: return "promise_violated";
  }
  return "?";
}

PromiseStatus check_gap_promise(const Formula& f, double epsilon, int limit) {
  if (!(epsilon > 0 && epsilon < 1)) throw ParameterError("epsilon must lie in (0, 1)");
  const auto ms = brute_force_max_sat(f, limit);
  PromiseStatus st;
  st.max_count = ms.count;
  st.threshold = gap_threshold(epsilon, f.num_clauses());
  if (ms.count == f.num_clauses()) st.kind = PromiseKind::Satisfiable;
  else if (ms.count <= st.threshold) st.kind = PromiseKind::GapUnsatisfiable;
  else st.kind = PromiseKind::PromiseViolated;
  return st;
}

GapInstance make_gap_instance(Formula f, int b, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw ParameterError("epsilon must lie in (0, 1)");
  if (occurrence_bound(f) > b) throw ParameterError("formula exceeds the occurrence bound");
  if (f.num_clauses() < f.num_vars()) throw ParameterError("gap instances need m >= v");
  return {std::move(f), b, epsilon};
}

}  // namespace satmdp
