#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace satmdp {

struct RewardParams {
  int p = 2;                  // Taylor degree
  int q = 4;                  // horizon exponent, H ~ alpha * v^q
  double alpha = 1.0 / 16.0;  // horizon constant
  int v = 1;                  // variable count
  std::int64_t h = 1;         // rounds
  std::int64_t H = 1;         // horizon = h * v
  double epsilon = 0.25;      // gap fraction
  int b = 6;                  // occurrence bound

  // h = max(1, floor(alpha * v^(q-1))).
  static RewardParams make(int v, int p = 2, int q = 4, double alpha = 1.0 / 16.0,
                           double epsilon = 0.25, int b = 6);
  // Fixes h directly; alpha is reported as h / v^(q-1).
  static RewardParams with_rounds(int v, std::int64_t h, int p = 2, int q = 4, double epsilon = 0.25,
                                  int b = 6);

  // v^(q-1)
  double vq1() const;
  // Divisor inside g_i: v^(q-1) * (3 - i/h).
  double scale(std::int64_t i) const;
  // 1 - epsilon / (6 b v^(q-2))
  double upper_bound() const;
  // ceil(epsilon * v / b), the smallest distance a forced stage lasts.
  int min_round_distance() const;

  void validate() const;
};

// 2 * ceil(ln v), the logarithmic Taylor degree (at least 2).
int log_degree(int v);

// sum_{i<=p} x^i / i!, Horner form.
inline double taylor_exp(int p, double x) {
  double acc = 1.0;
  for (int j = p; j >= 1; --j) acc = 1.0 + acc * x / j;
  return acc;
}

// g_i(x) = T_p(-x / (v^(q-1) (3 - i/h))). i in [1, h+1], x in [0, 2v].
double g(std::int64_t i, double x, const RewardParams& params);

// prod_{i<n} g_i(round_dists[i-1]) * g_n(within + free_dist) * g_{n+1}(used_dist)
double expected_reward(std::span<const int> round_dists, std::int64_t n, int within_round, int free_dist,
                       int used_dist, const RewardParams& params);

struct RangeCounterexample {
  std::string kind;  // "lower", "upper", "monotone", "positive"
  std::int64_t i = 0;
  int x = 0;
  double value = 0;
  double bound = 0;
};

struct RangeReport {
  RewardParams params;
  bool pass = false;
  std::int64_t evaluations = 0;
  std::int64_t violations = 0;
  std::optional<RangeCounterexample> counterexample;
  // Informational scan of (v, 2v]: largest x for which both bounds still
  // hold at every i (v when they fail immediately past v).
  int bounds_hold_through = 0;
};

// Grid i in [1, h+1], x in {0..2v}: bounds on [ceil(eps v / b), v], strict
// decrease along x and 0 < g <= 1 everywhere. `jobs` threads split i.
RangeReport verify_claim_range(const RewardParams& params, int jobs = 1);

struct StepCounterexample {
  std::int64_t i = 0;
  int c = 0, d = 0, x = 0;
  double lhs = 0, rhs = 0;
};

struct StepReport {
  RewardParams params;
  bool pass = false;
  std::int64_t comparisons = 0;
  std::int64_t violations = 0;
  std::optional<StepCounterexample> counterexample;
};

// g_i(c+x) g_{i+1}(d-x) >= g_i(c+x-1) g_{i+1}(d-x+1) for i in [1,h],
// c, d in [0, v], x in [1, d].
StepReport verify_claim_monotone_step(const RewardParams& params, int jobs = 1);

struct VMinReport {
  std::vector<StepReport> runs;  // one per doubling point
  std::optional<int> v_min;      // smallest tested v from which every tested v passes
};

// Runs the step check at v = 2, 4, ..., v_max with the other parameters fixed.
VMinReport find_v_min(int p, int q, double alpha, double epsilon, int b, int v_max, int jobs = 1);

}  // namespace satmdp
