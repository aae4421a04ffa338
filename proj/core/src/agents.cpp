#include "satmdp/agents.hpp"

#include "satmdp/errors.hpp"

namespace satmdp {

namespace {

std::optional<int> toward(const MdpInstance& inst, const MdpState& s, const Assignment& target) {
  if (s.terminal()) throw UsageError("no action at a terminal state");
  if (target.size() != s.w.size()) throw ParameterError("target length does not match the instance");
  if (s.stage == Stage::Two) return s.w[s.cursor] != target[s.cursor] ? 1 : 0;
  const auto vars = inst.formula().clause(s.cursor).variables();
  for (std::size_t a = 0; a < vars.size(); ++a)
    if (s.w[vars[a]] != target[vars[a]]) return static_cast<int>(a);
  return std::nullopt;
}

}  // namespace

int greedy_action(const MdpInstance& inst, const MdpState& s, const Assignment& target) {
  if (auto a = toward(inst, s, target)) return *a;
  throw InvariantViolation("offered clause " + std::to_string(s.cursor) +
                           " has no variable disagreeing with the target");
}

int greedy_action_lenient(const MdpInstance& inst, const MdpState& s, const Assignment& target) {
  return toward(inst, s, target).value_or(0);
}

PolicyFn greedy_policy(const MdpInstance& inst, const Assignment& target) {
  return [&inst, target](const StateHandle& h) { return greedy_action(inst, decode_state(inst, h), target); };
}

double exact_value_dp(const MdpInstance& inst, const MdpState& s, std::size_t node_budget) {
  SatMdpModel model(inst);
  ExactDp dp(model, node_budget);
  return dp.value(s.encode());
}

double greedy_value(const MdpInstance& inst, const MdpState& s, const Assignment& target,
                    std::size_t node_budget) {
  SatMdpModel model(inst);
  PolicyEvaluator ev(model, greedy_policy(inst, target), node_budget);
  return ev.value(s.encode());
}

Trajectory rollout(OracleSession& session, const MdpPolicy& policy) {
  Trajectory tr;
  MdpState s = session.initial();
  const std::int64_t H = session.instance().params().H;
  while (!s.terminal()) {
    if (static_cast<std::int64_t>(tr.steps.size()) >= H) throw InvariantViolation("episode exceeded the horizon");
    const int a = policy(s);
    if (a < 0 || a >= kNumActions) throw UsageError("policy emitted an illegal action");
    TrajectoryStep step{s.digest(), s.stage, a, static_cast<double>(session.sample_reward(s, a))};
    tr.steps.push_back(std::move(step));
    s = session.transition(s, a);
  }
  tr.terminal = s.kind;
  tr.final_digest = s.digest();
  return tr;
}

Trajectory rollout_actions(OracleSession& session, const std::vector<int>& actions) {
  if (actions.empty()) throw UsageError("empty action list");
  std::size_t k = 0;
  return rollout(session, [&](const MdpState&) {
    if (k >= actions.size()) throw UsageError("action list ended before a terminal state");
    return actions[k++];
  });
}

OracleTrajectory rollout(LinearRlOracle& oracle, const PolicyFn& policy) {
  OracleTrajectory tr;
  StateHandle s = oracle.initial_state();
  tr.states.push_back(s);
  for (int t = 0; t < oracle.horizon() && !oracle.is_terminal(s); ++t) {
    const int a = policy(s);
    if (a < 0 || a >= oracle.num_actions()) throw UsageError("policy emitted an illegal action");
    tr.rewards.push_back(oracle.sample_reward(s, a));
    tr.actions.push_back(a);
    s = oracle.transition(s, a);
    tr.states.push_back(s);
  }
  tr.terminated = oracle.is_terminal(s);
  return tr;
}

const char* to_string(SatAnswer a) { return a == SatAnswer::Yes ? "YES" : "NO"; }

namespace {

struct WitnessFound {
  Assignment w;
};

}  // namespace

ASatResult a_sat(const Formula& f, const RewardParams& params, const RlAlgorithm& algorithm,
                 std::uint64_t query_budget, std::uint64_t seed, std::optional<Assignment> start) {
  MdpInstance::Options opts;
  opts.mode = Mode::Simulator;
  opts.start = std::move(start);
  const MdpInstance sim = MdpInstance::build(f, params, opts);
  SatMdpModel model(sim);
  ASatResult res;
  const int threshold = sim.gap_threshold();
  SimulatedOracle oracle(model, seed, [&](const StateHandle& h) {
    ++res.states_seen;
    const MdpState s = decode_state(sim, h);
    if (s.satisfied > threshold) throw WitnessFound{s.w};
  });
  if (query_budget) oracle.set_query_budget(query_budget);
  try {
    algorithm(sim, oracle);
  } catch (const WitnessFound& found) {
    // Independent check on the formula; the incremental counts are not trusted.
    if (satisfied_count(f, found.w) > gap_threshold(params.epsilon, f.num_clauses())) {
      res.answer = SatAnswer::Yes;
      res.witness = found.w;
    }
  } catch (const RefusalError&) {
    res.budget_exhausted = true;
  }
  res.queries = oracle.counters();
  return res;
}

RlAlgorithm greedy_learner(Assignment target) {
  return [target = std::move(target)](const MdpInstance& sim, LinearRlOracle& oracle) {
    StateHandle s = oracle.initial_state();
    while (!oracle.is_terminal(s)) {
      const int a = greedy_action_lenient(sim, decode_state(sim, s), target);
      oracle.sample_reward(s, a);
      s = oracle.transition(s, a);
    }
  };
}

RlAlgorithm random_learner(std::uint64_t seed, int episodes) {
  return [seed, episodes](const MdpInstance&, LinearRlOracle& oracle) {
    CounterRng rng(seed, 0x72616e64);
    for (int e = 0; e < episodes; ++e) {
      StateHandle s = oracle.initial_state();
      while (!oracle.is_terminal(s)) {
        const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(oracle.num_actions())));
        oracle.sample_reward(s, a);
        s = oracle.transition(s, a);
      }
    }
  };
}

PolicyFn greedy_on_q(const QEstimate& q, int num_actions) {
  return [q, num_actions](const StateHandle& s) {
    int arg = -1;
    double best = 0;
    for (int a = 0; a < num_actions; ++a) {
      auto it = q.find({s, a});
      if (it == q.end())
        throw UsageError("no Q estimate for action " + std::to_string(a) + " at state " + hex_encode(s));
      if (arg < 0 || it->second > best) {
        best = it->second;
        arg = a;
      }
    }
    return arg;
  };
}

}  // namespace satmdp
