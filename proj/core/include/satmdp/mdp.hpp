#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "satmdp/cnf.hpp"
#include "satmdp/polyfeat.hpp"
#include "satmdp/reward.hpp"
#include "satmdp/rng.hpp"

namespace satmdp {

enum class Mode : std::uint8_t { Full, Simulator };

enum class Stage : std::uint8_t { One = 1, Two = 2, Terminal = 3 };

enum class TerminalKind : std::uint8_t { None = 0, GapSatisfied = 1, LastLevel = 2 };

const char* to_string(Mode m);
const char* to_string(Stage s);
const char* to_string(TerminalKind k);

inline constexpr int kNumActions = 3;

class MdpInstance {
 public:
  struct Options {
    std::optional<Assignment> wstar;
    std::optional<Assignment> start;  // all-false when absent
    Mode mode = Mode::Full;
    // Full mode searches for w* exhaustively up to this many variables when
    // none is given. Simulator mode never searches.
    int exhaustive_limit = kDefaultExhaustiveLimit;
  };

  static MdpInstance build(Formula f, const RewardParams& params, Options opts);
  static MdpInstance build(Formula f, const RewardParams& params) { return build(std::move(f), params, Options{}); }

  const Formula& formula() const noexcept { return *formula_; }
  const RewardParams& params() const noexcept { return params_; }
  const std::optional<Assignment>& wstar() const noexcept { return wstar_; }
  Mode mode() const noexcept { return mode_; }
  const Assignment& start() const noexcept { return start_; }
  int num_vars() const noexcept { return formula_->num_vars(); }
  int gap_threshold() const noexcept { return threshold_; }
  // sum_{i <= min(2p, v)} C(v, i), saturating.
  std::uint64_t dimension() const noexcept { return dimension_; }
  // Throws RefusalError when the dimension is too large to materialise.
  const FeatureIndex& feature_index() const;

  // Same formula, parameters, start and w*, different reward mode.
  MdpInstance with_mode(Mode m) const;
  // Same everything except w*; features are unaffected.
  MdpInstance with_wstar(std::optional<Assignment> wstar) const;

 private:
  MdpInstance() = default;
  std::shared_ptr<const Formula> formula_;
  RewardParams params_;
  std::optional<Assignment> wstar_;
  Mode mode_ = Mode::Full;
  Assignment start_;
  int threshold_ = 0;
  std::uint64_t dimension_ = 0;
  std::shared_ptr<const FeatureIndex> index_;
};

struct MdpState {
  std::int64_t n = 1;  // round, 1-based
  Stage stage = Stage::One;
  TerminalKind kind = TerminalKind::None;
  // Stage One: offered clause index. Stage Two: offered variable. Terminal: -1.
  int cursor = -1;
  Assignment w;
  Assignment w_round;
  VarSet free;
  std::vector<int> round_dists;
  std::int64_t step = 0;
  // Satisfied-literal count per clause and the number of satisfied clauses.
  std::vector<std::uint8_t> true_lits;
  int satisfied = 0;

  bool terminal() const noexcept { return stage == Stage::Terminal; }
  // Canonical bytes: n, stage/kind, cursor, w, free, w_round, round_dists.
  std::string encode() const;
  std::string digest() const;
  // dist(w_round, w); equals the number of flips made this round.
  int within_round_distance() const;
  int steps_this_round() const { return w.size() - free.size(); }
};

std::string hex_encode(const std::string& bytes);

MdpState initial_state(const MdpInstance& inst);
MdpState decode_state(const MdpInstance& inst, const std::string& bytes);

// Variables the three actions refer to at s, ascending. Stage Two repeats
// the offered variable.
std::vector<int> offered_variables(const MdpInstance& inst, const MdpState& s);

MdpState transition(const MdpInstance& inst, const MdpState& s, int action);

// Expected terminal reward computed from the extended assignment. Requires
// Full mode with w* present and a terminal state.
double exact_expected_reward(const MdpInstance& inst, const MdpState& terminal);

// Bernoulli mean of the reward for taking `action` at s, honouring the mode:
// 0 unless the step terminates; 0 without w*; 0 at the last level in
// Simulator mode.
double reward_mean(const MdpInstance& inst, const MdpState& s, int action);
// Mean attached to reaching `next` (already a successor state).
double reward_mean_on_entry(const MdpInstance& inst, const MdpState& next);

// Distances feeding the reward and value polynomials.
struct ExtDistances {
  int within = 0;  // dist(w_round, w)
  int free = 0;    // #free variables where w != w*
  int used = 0;    // #used variables where w != w*
};
ExtDistances ext_distances(const MdpState& s, const Assignment& wstar);

// Expected value, as a polynomial in the unknown target, of driving the state
// toward the target. Never reads w*.
MultilinearPoly greedy_value_poly(const MdpInstance& inst, const MdpState& s);

// psi(s): value polynomial coefficients; zero at terminal states.
FeatureVector features_state(const MdpInstance& inst, const MdpState& s);
// psi(s, a): value polynomial of the successor, terminal successors included
// (there it evaluates to the expected reward).
FeatureVector features_state_action(const MdpInstance& inst, const MdpState& s, int action);

// ceil(epsilon * m / b). Throws UsageError when `round_start` already
// satisfies more than the gap threshold.
int stage_one_floor(const MdpInstance& inst, const Assignment& round_start);

struct TrajectoryStep {
  std::string state_digest;
  Stage stage = Stage::One;
  int action = 0;
  double reward = 0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  TerminalKind terminal = TerminalKind::None;
  std::string final_digest;
  double total_reward() const;
};

// Typed single-owner session over one instance with query counters.
class OracleSession {
 public:
  OracleSession(const MdpInstance& inst, std::uint64_t seed);

  const MdpInstance& instance() const noexcept { return *inst_; }
  MdpState initial();
  MdpState transition(const MdpState& s, int action);
  // 0/1 draw; consumes one random number only when the mean is positive.
  int sample_reward(const MdpState& s, int action);
  FeatureVector features(const MdpState& s);
  FeatureVector features(const MdpState& s, int action);

  std::uint64_t transition_calls() const noexcept { return transitions_; }
  std::uint64_t reward_calls() const noexcept { return rewards_; }
  std::uint64_t feature_calls() const noexcept { return features_; }
  CounterRng& rng() noexcept { return rng_; }

 private:
  const MdpInstance* inst_;
  CounterRng rng_;
  std::uint64_t transitions_ = 0, rewards_ = 0, features_ = 0;
};

}  // namespace satmdp
