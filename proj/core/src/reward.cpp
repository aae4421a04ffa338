#include "satmdp/reward.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "satmdp/errors.hpp"

namespace satmdp {

RewardParams RewardParams::make(int v, int p, int q, double alpha, double epsilon, int b) {
  RewardParams r;
  r.v = v;
  r.p = p;
  r.q = q;
  r.alpha = alpha;
  r.epsilon = epsilon;
  r.b = b;
  if (v < 1 || q < 2) throw ParameterError("need v >= 1 and q >= 2");
  const double raw = std::floor(alpha * r.vq1() + 1e-9);
  if (raw > 4e18) throw ParameterError("round count overflows");
  r.h = std::max<std::int64_t>(1, static_cast<std::int64_t>(raw));
  r.H = r.h * v;
  r.validate();
  return r;
}

RewardParams RewardParams::with_rounds(int v, std::int64_t h, int p, int q, double epsilon, int b) {
  RewardParams r;
  r.v = v;
  r.p = p;
  r.q = q;
  r.epsilon = epsilon;
  r.b = b;
  r.h = h;
  r.H = h * v;
  if (v < 1 || q < 2) throw ParameterError("need v >= 1 and q >= 2");
  r.alpha = static_cast<double>(h) / r.vq1();
  r.validate();
  return r;
}

double RewardParams::vq1() const { return std::pow(static_cast<double>(v), q - 1); }

double RewardParams::scale(std::int64_t i) const {
  return vq1() * (3.0 - static_cast<double>(i) / static_cast<double>(h));
}

double RewardParams::upper_bound() const {
  return 1.0 - epsilon / (6.0 * b * std::pow(static_cast<double>(v), q - 2));
}

int RewardParams::min_round_distance() const {
  return static_cast<int>(std::ceil(epsilon * v / b - 1e-9));
}

void RewardParams::validate() const {
  if (p < 0) throw ParameterError("Taylor degree p must be non-negative");
  if (q < 2) throw ParameterError("q must be at least 2");
  if (v < 1) throw ParameterError("v must be positive");
  if (h < 1) throw ParameterError("round count h must be positive");
  if (H != h * v) throw ParameterError("horizon must equal h * v");
  if (!(epsilon > 0 && epsilon < 1)) throw ParameterError("epsilon must lie in (0, 1)");
  if (b < 3) throw ParameterError("occurrence bound b must be at least 3");
  if (!(alpha > 0)) throw ParameterError("alpha must be positive");
}

int log_degree(int v) {
  if (v < 1) throw ParameterError("v must be positive");
  return std::max(2, 2 * static_cast<int>(std::ceil(std::log(static_cast<double>(v)))));
}

double g(std::int64_t i, double x, const RewardParams& params) {
  if (i < 1 || i > params.h + 1)
    throw ParameterError("round index " + std::to_string(i) + " outside [1, h+1]");
  if (!(x >= 0 && x <= 2.0 * params.v)) throw ParameterError("g argument outside [0, 2v]");
  return taylor_exp(params.p, x * (-1.0 / params.scale(i)));
}

double expected_reward(std::span<const int> round_dists, std::int64_t n, int within_round, int free_dist,
                       int used_dist, const RewardParams& params) {
  if (n < 1 || n > params.h) throw ParameterError("terminal round outside [1, h]");
  if (static_cast<std::int64_t>(round_dists.size()) != n - 1)
    throw ParameterError("expected n-1 round distances");
  const int v = params.v;
  auto check = [v](int x, const char* what) {
    if (x < 0 || x > v) throw ParameterError(std::string(what) + " outside [0, v]");
  };
  for (int d : round_dists) check(d, "round distance");
  check(within_round, "within-round distance");
  check(free_dist, "free distance");
  check(used_dist, "used distance");
  double r = 1.0;
  for (std::size_t i = 0; i < round_dists.size(); ++i)
    r *= g(static_cast<std::int64_t>(i) + 1, round_dists[i], params);
  r *= g(n, within_round + free_dist, params);
  r *= g(n + 1, used_dist, params);
  return r;
}

namespace {

// Splits [lo, hi] into `jobs` contiguous chunks and runs fn(lo_k, hi_k, k).
template <class Fn>
void parallel_range(std::int64_t lo, std::int64_t hi, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  const std::int64_t total = hi - lo + 1;
  if (jobs == 1 || total < 2 * jobs) {
    fn(lo, hi, 0);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (total + jobs - 1) / jobs;
  for (int k = 0; k < jobs; ++k) {
    const std::int64_t a = lo + k * chunk;
    const std::int64_t b = std::min(hi, a + chunk - 1);
    if (a > b) break;
    pool.emplace_back([&fn, a, b, k] { fn(a, b, k); });
  }
  for (auto& t : pool) t.join();
}

#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define SATMDP_MULTIVERSION __attribute__((target_clones("avx512f", "avx2", "default")))
#else
#define SATMDP_MULTIVERSION
#endif

// Fills gp[x] = g(x) for x in [0, n) given -1/scale and counts failed range
// checks; `*ext_bad` counts bound failures on (v, hold]. Division by a power
// of two is replaced by the exact reciprocal product, so values match
// taylor_exp bit for bit.
SATMDP_MULTIVERSION
int range_row(double* __restrict gp, int n, double neg_inv, int p, int lo_x, int v, double upper, int hold,
              int* ext_bad) {
  for (int x = 0; x < n; ++x) gp[x] = 1.0;
  for (int j = p; j >= 1; --j) {
    const double dj = j;
    if ((j & (j - 1)) == 0) {
      const double rj = 1.0 / dj;
      for (int x = 0; x < n; ++x) gp[x] = 1.0 + gp[x] * (static_cast<double>(x) * neg_inv) * rj;
    } else {
      for (int x = 0; x < n; ++x) gp[x] = 1.0 + gp[x] * (static_cast<double>(x) * neg_inv) / dj;
    }
  }
  int bad = !(gp[0] > 0.0) | !(gp[0] <= 1.0);
  for (int x = 1; x < n; ++x) bad += !(gp[x] > 0.0) | !(gp[x] <= 1.0) | !(gp[x] < gp[x - 1]);
  for (int x = lo_x; x <= v; ++x) bad += !(gp[x] >= 0.25) | !(gp[x] <= upper);
  int ext = 0;
  for (int x = v + 1; x <= hold; ++x) ext += !(gp[x] >= 0.25) | !(gp[x] <= upper);
  *ext_bad = ext;
  return bad;
}

struct RangeChunk {
  std::int64_t violations = 0;
  std::optional<RangeCounterexample> first;
  int hold_through;
};

}  // namespace

RangeReport verify_claim_range(const RewardParams& params, int jobs) {
  params.validate();
  const int v = params.v;
  const int n = 2 * v + 1;
  const int lo_x = params.min_round_distance();
  const double upper = params.upper_bound();
  const int p = params.p;

  std::vector<RangeChunk> chunks(static_cast<std::size_t>(std::max(1, jobs)));
  for (auto& c : chunks) c.hold_through = 2 * v;

  parallel_range(1, params.h + 1, jobs, [&](std::int64_t i0, std::int64_t i1, int k) {
    auto& out = chunks[static_cast<std::size_t>(k)];
    std::vector<double> gv(static_cast<std::size_t>(n));
    double* gp = gv.data();
    auto note = [&](const char* kind, std::int64_t i, int x, double value, double bound) {
      ++out.violations;
      if (!out.first) out.first = RangeCounterexample{kind, i, x, value, bound};
    };
    for (std::int64_t i = i0; i <= i1; ++i) {
      const double neg_inv = -1.0 / params.scale(i);
      int ext_bad = 0;
      if (range_row(gp, n, neg_inv, p, lo_x, v, upper, out.hold_through, &ext_bad)) {
        for (int x = 0; x < n; ++x)
          if (!(gp[x] > 0.0 && gp[x] <= 1.0)) note("positive", i, x, gp[x], 0.0);
        for (int x = 1; x < n; ++x)
          if (!(gp[x] < gp[x - 1])) note("monotone", i, x, gp[x], gp[x - 1]);
        for (int x = lo_x; x <= v; ++x) {
          if (!(gp[x] >= 0.25)) note("lower", i, x, gp[x], 0.25);
          if (!(gp[x] <= upper)) note("upper", i, x, gp[x], upper);
        }
      }
      if (ext_bad) {
        for (int x = v + 1; x <= out.hold_through; ++x)
          if (!(gp[x] >= 0.25 && gp[x] <= upper)) {
            out.hold_through = x - 1;
            break;
          }
      }
    }
  });

  RangeReport rep;
  rep.params = params;
  rep.evaluations = (params.h + 1) * n;
  rep.bounds_hold_through = 2 * v;
  for (auto& c : chunks) {
    rep.violations += c.violations;
    if (!rep.counterexample && c.first) rep.counterexample = c.first;
    rep.bounds_hold_through = std::min(rep.bounds_hold_through, c.hold_through);
  }
  rep.pass = rep.violations == 0;
  return rep;
}

StepReport verify_claim_monotone_step(const RewardParams& params, int jobs) {
  params.validate();
  const int v = params.v;
  const int n = 2 * v + 1;
  struct Chunk {
    std::int64_t violations = 0;
    std::optional<StepCounterexample> first;
  };
  std::vector<Chunk> chunks(static_cast<std::size_t>(std::max(1, jobs)));

  parallel_range(1, params.h, jobs, [&](std::int64_t i0, std::int64_t i1, int k) {
    auto& out = chunks[static_cast<std::size_t>(k)];
    std::vector<double> gi(static_cast<std::size_t>(n)), gj(static_cast<std::size_t>(n));
    for (std::int64_t i = i0; i <= i1; ++i) {
      const double si = params.scale(i), sj = params.scale(i + 1);
      for (int x = 0; x < n; ++x) {
        gi[static_cast<std::size_t>(x)] = taylor_exp(params.p, x * (-1.0 / si));
        gj[static_cast<std::size_t>(x)] = taylor_exp(params.p, x * (-1.0 / sj));
      }
      for (int c = 0; c <= v; ++c) {
        const double* a = gi.data() + c;
        for (int d = 1; d <= v; ++d) {
          const double* bq = gj.data() + d;
          int bad = 0;
          for (int x = 1; x <= d; ++x) bad += !(a[x] * bq[-x] >= a[x - 1] * bq[-x + 1]);
          if (bad) {
            out.violations += bad;
            if (!out.first)
              for (int x = 1; x <= d; ++x) {
                const double lhs = a[x] * bq[-x], rhs = a[x - 1] * bq[-x + 1];
                if (!(lhs >= rhs)) {
                  out.first = StepCounterexample{i, c, d, x, lhs, rhs};
                  break;
                }
              }
          }
        }
      }
    }
  });

  StepReport rep;
  rep.params = params;
  rep.comparisons = params.h * static_cast<std::int64_t>(v + 1) * (static_cast<std::int64_t>(v) * (v + 1) / 2);
  for (auto& c : chunks) {
    rep.violations += c.violations;
    if (!rep.counterexample && c.first) rep.counterexample = c.first;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

VMinReport find_v_min(int p, int q, double alpha, double epsilon, int b, int v_max, int jobs) {
  VMinReport out;
  for (int v = 2; v <= v_max; v *= 2)
    out.runs.push_back(verify_claim_monotone_step(RewardParams::make(v, p, q, alpha, epsilon, b), jobs));
  for (std::size_t k = out.runs.size(); k-- > 0;) {
    if (!out.runs[k].pass) break;
    out.v_min = out.runs[k].params.v;
  }
  return out;
}

}  // namespace satmdp
