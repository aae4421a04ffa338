// Acceptance suite: one PASS/FAIL line per criterion. Arguments select
// criteria by number (default: all). Exit status is 0 iff all selected pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "satmdp/generators.hpp"
#include "satmdp/agents.hpp"
#include "satmdp/cnf.hpp"
#include "satmdp/epsnet.hpp"
#include "satmdp/errors.hpp"
#include "satmdp/gapsat.hpp"
#include "satmdp/horizon_split.hpp"
#include "satmdp/mdp.hpp"
#include "satmdp/oracle.hpp"
#include "satmdp/reward.hpp"
#include "satmdp/toy_mdp.hpp"

using namespace satmdp;

namespace {

// Pinned tolerances and budgets.
constexpr double kLinearityTol = 1e-8;
constexpr double kOptimalityTol = 1e-9;
constexpr double kPolicyLossTol = 0.1;
constexpr double kResidualTol = 1e-8;
constexpr double kPerturbEps = 0.2;
constexpr double kLinearityRuntime = 120.0;
constexpr double kStepRuntime = 300.0;
constexpr double kEpsNetRuntime = 120.0;
constexpr int kMinTrialsOk = 18;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared by criteria 1 and 2: satisfiable planted formulas, gap-checked.
struct LinearityCase {
  MdpInstance inst;
};

std::vector<LinearityCase> linearity_cases() {
  constexpr double eps = 0.1;
  constexpr int b = 6;
  std::vector<LinearityCase> out;
  for (int k = 0; k < 50; ++k) {
    const int v = 4 + k % 4;
    const int h = 2 + (k / 4) % 2;
    auto pl = gen::planted_formula_retry(v, v + 1, b, eps, 1000 + static_cast<std::uint64_t>(k), 0.6);
    if (check_gap_promise(pl.formula, eps).kind != PromiseKind::Satisfiable)
      throw InvariantViolation("planted formula is not satisfiable");
    const auto gi = make_gap_instance(pl.formula, b, eps);
    out.push_back({MdpInstance::build(gi.formula, RewardParams::with_rounds(v, h, 2, 4, eps, b))});
  }
  return out;
}

Outcome linearity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  std::size_t states = 0;
  for (const auto& c : linearity_cases()) {
    SatMdpModel model(c.inst);
    const auto theta = theta_vector(*c.inst.wstar(), c.inst.feature_index());
    PolicyEvaluator greedy(model, greedy_policy(c.inst, *c.inst.wstar()));
    for (const auto& h : reachable_states(model)) {
      const MdpState s = decode_state(c.inst, h);
      const double lin = inner_product(features_state(c.inst, s), theta);
      const double val = s.terminal() ? 0.0 : greedy.value(h);
      worst = std::max(worst, std::abs(lin - val));
      ++states;
    }
  }
  const double t = seconds_since(t0);
  return {worst <= kLinearityTol && t <= kLinearityRuntime,
          fmt("50 formulas, %zu states, max |<psi,theta> - V_greedy| = %.3g (tol %.0e), %.1fs (limit %.0fs)", states,
              worst, kLinearityTol, t, kLinearityRuntime)};
}

Outcome greedy_optimality() {
  double worst = 0;
  std::size_t states = 0;
  for (const auto& c : linearity_cases()) {
    SatMdpModel model(c.inst);
    ExactDp dp(model);
    PolicyEvaluator greedy(model, greedy_policy(c.inst, *c.inst.wstar()));
    for (const auto& h : reachable_states(model)) {
      if (model.is_terminal(h)) continue;
      worst = std::max(worst, std::abs(dp.value(h) - greedy.value(h)));
      ++states;
    }
  }
  return {worst <= kOptimalityTol,
          fmt("50 formulas, %zu live states, max |V* - V_greedy| = %.3g (tol %.0e)", states, worst, kOptimalityTol)};
}

Outcome claim_range() {
  std::int64_t evals = 0, viol = 0;
  std::string failures;
  for (int v : {10, 100, 1000}) {
    for (bool logp : {false, true}) {
      const auto params =
          logp ? RewardParams::make(v, log_degree(v), 2) : RewardParams::make(v, 2, 4);
      const auto rep = verify_claim_range(params, jobs());
      evals += rep.evaluations;
      viol += rep.violations;
      if (!rep.pass) failures += fmt(" v=%d p=%d q=%d", v, params.p, params.q);
    }
  }
  return {viol == 0, fmt("6 configurations, %lld evaluations, %lld violations%s", static_cast<long long>(evals),
                         static_cast<long long>(viol), failures.c_str())};
}

Outcome monotone_step() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = find_v_min(2, 4, 1.0 / 16.0, 0.25, 6, 64, jobs());
  const double t = seconds_since(t0);
  std::int64_t cmp = 0;
  for (const auto& r : rep.runs) cmp += r.comparisons;
  const bool ok = rep.v_min && *rep.v_min <= 64 && t <= kStepRuntime;
  return {ok, fmt("p=2 q=4 alpha=1/16, v = 2..64 doubling, %lld comparisons, v_min = %s (limit 64), %.1fs",
                  static_cast<long long>(cmp), rep.v_min ? std::to_string(*rep.v_min).c_str() : "none", t)};
}

// Random depth-first completion that never enters a GapSatisfied terminal.
bool full_horizon_path(const MdpInstance& inst, const MdpState& s, CounterRng& rng, std::vector<MdpState>& path,
                       long& nodes) {
  path.push_back(s);
  if (s.terminal()) return true;
  if (++nodes > 200000) return false;
  int order[3] = {0, 1, 2};
  std::shuffle(order, order + 3, rng);
  for (int a : order) {
    MdpState t = transition(inst, s, a);
    if (t.kind == TerminalKind::GapSatisfied) continue;
    if (full_horizon_path(inst, t, rng, path, nodes)) return true;
  }
  path.pop_back();
  return false;
}

Outcome reward_decay() {
  // 24 triples with 7 of 8 sign patterns each: v = 72, m = 168, every
  // variable in 7 clauses. eps = 1/14 gives a stage-One floor of 2.
  constexpr int b = 7;
  constexpr double eps = 1.0 / 14.0;
  auto pl = gen::cube_minus_one_formula(24, 11);
  const int v = pl.formula.num_vars();
  const int m = pl.formula.num_clauses();
  struct Cfg {
    int q;
    std::int64_t h;
  };
  int rollouts = 0, incomplete = 0, viol = 0, floor_viol = 0, min_one = 1 << 30;
  double worst_ratio = 0;
  for (const Cfg cfg : {Cfg{4, 3}, Cfg{2, 4}, Cfg{3, 4}}) {
    const auto params = RewardParams::with_rounds(v, cfg.h, 2, cfg.q, eps, b);
    MdpInstance::Options o;
    o.wstar = pl.hidden;
    const auto inst = MdpInstance::build(pl.formula, params, o);
    const double bound = std::pow(params.upper_bound(), static_cast<double>(cfg.h));
    const int floor1 = static_cast<int>(std::ceil(eps * m / b - 1e-9));
    CounterRng rng(5, static_cast<std::uint64_t>(cfg.q));
    const int n = 1000;
    for (int t = 0; t < n; ++t) {
      std::vector<MdpState> path;
      long nodes = 0;
      ++rollouts;
      if (!full_horizon_path(inst, initial_state(inst), rng, path, nodes) ||
          path.back().kind != TerminalKind::LastLevel) {
        ++incomplete;
        continue;
      }
      const double r = exact_expected_reward(inst, path.back());
      worst_ratio = std::max(worst_ratio, r / bound);
      if (r > bound) ++viol;
      int one = 0;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        if (path[k].stage == Stage::One) ++one;
        if (path[k + 1].n != path[k].n || path[k + 1].terminal()) {
          min_one = std::min(min_one, one);
          if (one < floor1) ++floor_viol;
          one = 0;
        }
      }
    }
  }
  return {viol == 0 && floor_viol == 0 && incomplete == 0,
          fmt("v=72 m=168 b=7 eps=1/14, %d rollouts (1000 each for q=4 h=3, q=2 h=4, q=3 h=4), %d incomplete, "
              "%d reward violations (max reward/bound %.4f), %d stage-One violations (shortest %d)",
              rollouts, incomplete, viol, worst_ratio, floor_viol, min_one)};
}

Outcome reduction() {
  constexpr double eps = 0.125;
  constexpr int b = 8;
  int correct = 0, total = 0, false_yes = 0, unverified_yes = 0;
  auto check_yes = [&](const Formula& f, const ASatResult& r) {
    if (r.answer != SatAnswer::Yes) return;
    if (!r.witness || satisfied_count(f, *r.witness) <= gap_threshold(eps, f.num_clauses())) ++unverified_yes;
  };
  for (int k = 0; k < 20; ++k) {
    const int v = 4 + k % 5;
    auto pl = gen::planted_formula_retry(v, v + 2 + k % 3, b, eps, 500 + static_cast<std::uint64_t>(k));
    if (check_gap_promise(pl.formula, eps).kind != PromiseKind::Satisfiable) continue;
    const auto params = RewardParams::with_rounds(v, 2, 2, 4, eps, b);
    const auto r = a_sat(pl.formula, params, greedy_learner(pl.hidden), 0, 7000 + static_cast<std::uint64_t>(k));
    ++total;
    correct += r.answer == SatAnswer::Yes;
    check_yes(pl.formula, r);
  }
  std::vector<Formula> unsat;
  for (int k = 0; k < 20; ++k) {
    Formula f = gen::cube_formula(1 + k % 2, 900 + static_cast<std::uint64_t>(k));
    if (check_gap_promise(f, eps).kind != PromiseKind::GapUnsatisfiable) continue;
    const auto params = RewardParams::with_rounds(f.num_vars(), 2, 2, 4, eps, b);
    const auto target = brute_force_max_sat(f).witness;
    const auto r = a_sat(f, params, greedy_learner(target), 0, 8000 + static_cast<std::uint64_t>(k));
    ++total;
    correct += r.answer == SatAnswer::No;
    check_yes(f, r);
    unsat.push_back(std::move(f));
  }
  int random_runs = 0;
  for (int k = 0; k < 100; ++k) {
    const Formula& f = unsat[static_cast<std::size_t>(k) % unsat.size()];
    const auto params = RewardParams::with_rounds(f.num_vars(), 2, 2, 4, eps, b);
    const auto r = a_sat(f, params, random_learner(300 + static_cast<std::uint64_t>(k), 5), 0,
                         9000 + static_cast<std::uint64_t>(k));
    ++random_runs;
    false_yes += r.answer == SatAnswer::Yes;
    check_yes(f, r);
  }
  return {correct == 40 && total == 40 && false_yes == 0 && unverified_yes == 0,
          fmt("greedy learner %d/%d correct (20 satisfiable + 20 gap-unsatisfiable), random learner %d false YES in "
              "%d runs, %d YES without verified witness",
              correct, total, false_yes, random_runs, unverified_yes)};
}

Outcome simulator_consistency() {
  std::size_t states = 0;
  int mismatches = 0, nonzero = 0, last_level = 0;
  for (int k = 0; k < 10; ++k) {
    const int v = 4 + k % 3;
    auto pl = gen::planted_formula_retry(v, v + 1, 6, 0.1, 40 + static_cast<std::uint64_t>(k), 0.6);
    const auto params = RewardParams::with_rounds(v, 2, 2, 4, 0.1, 6);
    MdpInstance::Options o;
    o.wstar = pl.hidden;
    const auto full = MdpInstance::build(pl.formula, params, o);
    const auto sim = full.with_mode(Mode::Simulator);
    SatMdpModel fm(full), sm(sim);
    const auto fs = reachable_states(fm);
    const auto ss = reachable_states(sm);
    if (fs != ss) ++mismatches;
    for (const auto& h : fs) {
      ++states;
      if (fm.is_terminal(h)) continue;
      for (int a = 0; a < kNumActions; ++a) {
        if (fm.transition(h, a) != sm.transition(h, a)) ++mismatches;
        const auto f1 = fm.features(h, a);
        const auto f2 = sm.features(h, a);
        if (f1.size() != f2.size() || std::memcmp(f1.data(), f2.data(), f1.size() * sizeof(double)) != 0)
          ++mismatches;
        const MdpState next = decode_state(sim, sm.transition(h, a));
        if (next.kind == TerminalKind::LastLevel) {
          ++last_level;
          if (sm.expected_reward(h, a) != 0.0) ++nonzero;
        }
      }
      const auto p1 = features_state(full, decode_state(full, h));
      const auto p2 = features_state(sim, decode_state(sim, h));
      if (std::memcmp(p1.data(), p2.data(), p1.size() * sizeof(double)) != 0) ++mismatches;
    }
  }
  return {mismatches == 0 && nonzero == 0 && last_level > 0,
          fmt("10 instances, %zu states, %d Full/Simulator mismatches, %d of %d last-level rewards nonzero", states,
              mismatches, nonzero, last_level)};
}

Outcome eps_net() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Toy {
    int d, H;
  };
  std::string detail;
  bool pass = true;
  for (const Toy toy : {Toy{2, 3}, Toy{2, 4}, Toy{3, 3}}) {
    int ok = 0;
    for (int t = 0; t < 20; ++t) {
      ToyTreeMdp::Config c;
      c.d = toy.d;
      c.H = toy.H;
      c.seed = 100 + static_cast<std::uint64_t>(t);
      const ToyTreeMdp mdp(c);
      SimulatedOracle oracle(mdp, 1000 + static_cast<std::uint64_t>(t));
      EpsNetOptions o;
      o.eps = 0.1;
      o.delta = 0.1;
      const auto r = epsilon_net_search(oracle, o);
      ExactDp dp(mdp);
      ok += path_value(mdp, mdp.initial_state(), r.actions) >= dp.value(mdp.initial_state()) - kPolicyLossTol;
    }
    pass = pass && ok >= kMinTrialsOk;
    detail += fmt("d=%d H=%d: %d/20; ", toy.d, toy.H, ok);
  }
  const double t = seconds_since(t0);
  return {pass && t <= kEpsNetRuntime, detail + fmt("%.1fs (limit %.0fs)", t, kEpsNetRuntime)};
}

Outcome horizon_split() {
  struct Toy {
    int d, H;
    ToyTreeMdp::RewardShape shape;
    bool deterministic;
  };
  std::string detail;
  bool pass = true;
  std::size_t max_basis_excess = 0;
  double max_res = 0;
  for (const Toy toy : {Toy{4, 4, ToyTreeMdp::RewardShape::TerminalOnly, false},
                        Toy{2, 4, ToyTreeMdp::RewardShape::PerStep, false},
                        Toy{2, 9, ToyTreeMdp::RewardShape::PerStep, true}}) {
    int ok = 0;
    for (int t = 0; t < 20; ++t) {
      ToyTreeMdp::Config c;
      c.d = toy.d;
      c.H = toy.H;
      c.shape = toy.shape;
      c.deterministic = toy.deterministic;
      c.seed = 200 + static_cast<std::uint64_t>(t);
      const ToyTreeMdp mdp(c);
      SimulatedOracle oracle(mdp, 2000 + static_cast<std::uint64_t>(t));
      try {
        const auto r = horizon_split_policy(oracle, 0.1, 0.1);
        for (const auto& lv : r.levels) {
          if (lv.basis_size > static_cast<std::size_t>(toy.d)) ++max_basis_excess;
          max_res = std::max(max_res, lv.max_residual);
        }
        ExactDp dp(mdp);
        PolicyEvaluator pe(mdp, greedy_on_q(r.q, mdp.num_actions()));
        ok += pe.value(mdp.initial_state()) >= dp.value(mdp.initial_state()) - kPolicyLossTol;
      } catch (const std::exception& e) {
        detail += fmt("trial %d error: %s; ", t, e.what());
      }
    }
    pass = pass && ok >= kMinTrialsOk;
    detail += fmt("d=%d H=%d %s%s: %d/20; ", toy.d, toy.H,
                  toy.shape == ToyTreeMdp::RewardShape::PerStep ? "per-step" : "terminal",
                  toy.deterministic ? " deterministic" : "", ok);
  }
  return {pass && max_basis_excess == 0 && max_res <= kResidualTol,
          detail + fmt("bases over d: %zu, max residual %.3g (tol %.0e)", max_basis_excess, max_res, kResidualTol)};
}

Outcome q_perturbation() {
  int cases = 0, viol = 0;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    ToyTreeMdp::Config c;
    c.d = 2 + t % 3;
    c.H = 3 + t % 2;
    c.shape = t % 2 ? ToyTreeMdp::RewardShape::PerStep : ToyTreeMdp::RewardShape::TerminalOnly;
    c.seed = 300 + static_cast<std::uint64_t>(t / 10);
    const ToyTreeMdp mdp(c);
    ExactDp dp(mdp);
    const double bound = kPerturbEps / (2.0 * c.H);
    CounterRng rng(77, static_cast<std::uint64_t>(t));
    QEstimate q;
    for (const auto& s : reachable_states(mdp)) {
      if (mdp.is_terminal(s)) continue;
      for (int a = 0; a < mdp.num_actions(); ++a) q[{s, a}] = dp.q_value(s, a) + (2.0 * rng.uniform() - 1.0) * bound;
    }
    PolicyEvaluator pe(mdp, greedy_on_q(q, mdp.num_actions()));
    const double loss = dp.value(mdp.initial_state()) - pe.value(mdp.initial_state());
    worst = std::max(worst, loss);
    ++cases;
    if (loss > kPerturbEps) ++viol;
  }
  return {viol == 0, fmt("%d perturbed Q tables (|noise| <= eps/(2H), eps = %.1f), max loss %.4f, %d over eps", cases,
                         kPerturbEps, worst, viol)};
}

Outcome transform() {
  constexpr int b = 6;
  int viol_occ = 0, viol_sat = 0, viol_size = 0, viol_max = 0, split = 0;
  double worst_ratio = 0;
  for (int k = 0; k < 200; ++k) {
    const int v = 2 + k % 4;
    const int m = 5 + k % 6;
    // Redraw until the non-padding part of the output is small enough to
    // enumerate.
    std::uint64_t seed = 600 + 1000 * static_cast<std::uint64_t>(k);
    Formula f = gen::random_formula(v, m, 3, seed);
    auto t = bounded_occurrence_transform_full(f, b);
    while (std::count_if(t.origin.begin(), t.origin.end(), [](int o) { return o >= 0; }) > 22) {
      f = gen::random_formula(v, m, 3, ++seed);
      t = bounded_occurrence_transform_full(f, b);
    }
    const Formula& g = t.formula;
    if (!t.split_vars.empty()) ++split;
    if (occurrence_bound(g) > b) ++viol_occ;
    const double ratio = static_cast<double>(g.num_clauses()) / f.num_clauses();
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 10.0) ++viol_size;
    const bool fsat = brute_force_sat(f).has_value();
    // Padding variables are fixed by transformed_max_sat; small outputs are
    // also enumerated directly.
    const int mg = transformed_max_sat(t).count;
    if (g.num_vars() <= 20 && brute_force_max_sat(g).count != mg) ++viol_max;
    const bool gsat = mg == g.num_clauses();
    if (fsat != gsat) ++viol_sat;
    const int mf = brute_force_max_sat(f).count;
    if (mg > mf + g.num_clauses() - f.num_clauses()) ++viol_max;
  }
  return {viol_occ + viol_sat + viol_size + viol_max == 0,
          fmt("200 formulas (%d with split variables), b=%d: occurrence %d, satisfiability %d, size ratio %d (max "
              "%.2f, limit 10), max-sat %d violations",
              split, b, viol_occ, viol_sat, viol_size, worst_ratio, viol_max)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "linearity", linearity},
      {2, "greedy-optimality", greedy_optimality},
      {3, "claim-range", claim_range},
      {4, "claim-monotone-step", monotone_step},
      {5, "reward-decay", reward_decay},
      {6, "reduction", reduction},
      {7, "simulator-consistency", simulator_consistency},
      {8, "eps-net", eps_net},
      {9, "horizon-split", horizon_split},
      {10, "q-perturbation", q_perturbation},
      {11, "bounded-occurrence-transform", transform},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
