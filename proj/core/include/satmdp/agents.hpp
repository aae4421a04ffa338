#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "satmdp/mdp.hpp"
#include "satmdp/oracle.hpp"

namespace satmdp {

// Action that moves w toward `target`: in stage One the lowest-index clause
// variable where w and target differ, in stage Two flip (1) iff they differ.
// Throws InvariantViolation if stage One offers no such variable, which
// cannot happen when `target` satisfies the formula.
int greedy_action(const MdpInstance& inst, const MdpState& s, const Assignment& target);
// Same, but falls back to action 0 instead of throwing; usable with targets
// that do not satisfy the formula.
int greedy_action_lenient(const MdpInstance& inst, const MdpState& s, const Assignment& target);

PolicyFn greedy_policy(const MdpInstance& inst, const Assignment& target);

// V*(s) by exhaustive max-over-actions recursion.
double exact_value_dp(const MdpInstance& inst, const MdpState& s, std::size_t node_budget = 5'000'000);
// Value of the greedy policy toward `target` from s.
double greedy_value(const MdpInstance& inst, const MdpState& s, const Assignment& target,
                    std::size_t node_budget = 5'000'000);

using MdpPolicy = std::function<int(const MdpState&)>;

// Runs one episode from the initial state, sampling rewards.
Trajectory rollout(OracleSession& session, const MdpPolicy& policy);
// Plays a fixed action list; it must be non-empty and long enough to reach
// a terminal state.
Trajectory rollout_actions(OracleSession& session, const std::vector<int>& actions);

// Generic trajectory through the oracle interface.
struct OracleTrajectory {
  std::vector<StateHandle> states;  // visited states, including the last
  std::vector<int> actions;
  std::vector<double> rewards;
  bool terminated = false;
};
OracleTrajectory rollout(LinearRlOracle& oracle, const PolicyFn& policy);

enum class SatAnswer { Yes, No };
const char* to_string(SatAnswer a);

// An RL algorithm run inside the reduction. It receives the simulator
// instance (no w*) for decoding handles and the counted oracle.
using RlAlgorithm = std::function<void(const MdpInstance& simulator, LinearRlOracle& oracle)>;

struct ASatResult {
  SatAnswer answer = SatAnswer::No;
  std::optional<Assignment> witness;  // re-verified when answer is Yes
  QueryCounters queries;
  bool budget_exhausted = false;
  std::uint64_t states_seen = 0;
};

// Runs `algorithm` against the zero-last-level simulator of f. Answers Yes
// as soon as a visited assignment satisfies more than (1 - epsilon) m
// clauses and that count is re-checked on the formula itself; No when the
// algorithm finishes or the query budget runs out.
ASatResult a_sat(const Formula& f, const RewardParams& params, const RlAlgorithm& algorithm,
                 std::uint64_t query_budget, std::uint64_t seed, std::optional<Assignment> start = {});

// One greedy episode toward `target` (lenient on non-satisfying targets).
RlAlgorithm greedy_learner(Assignment target);
// Uniformly random actions for `episodes` episodes.
RlAlgorithm random_learner(std::uint64_t seed, int episodes);

// Q estimates keyed by (state handle, action).
using QEstimate = std::map<std::pair<StateHandle, int>, double>;

// argmax_a q(s, a), ties to the lowest action. A missing entry throws
// UsageError naming the state digest.
PolicyFn greedy_on_q(const QEstimate& q, int num_actions);

}  // namespace satmdp
