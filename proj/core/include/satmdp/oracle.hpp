#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "satmdp/mdp.hpp"
#include "satmdp/rng.hpp"

namespace satmdp {

// Opaque state identity: canonical bytes, equal iff the states are equal.
using StateHandle = std::string;

// Full description of a finite-horizon deterministic MDP with features.
// Implementations are immutable and shareable.
class TreeModel {
 public:
  virtual ~TreeModel() = default;
  virtual StateHandle initial_state() const = 0;
  virtual bool is_terminal(const StateHandle& s) const = 0;
  virtual int num_actions() const = 0;
  virtual StateHandle transition(const StateHandle& s, int a) const = 0;
  // Mean of R(s, a).
  virtual double expected_reward(const StateHandle& s, int a) const = 0;
  virtual FeatureVector features(const StateHandle& s, int a) const = 0;
  virtual int horizon() const = 0;
  virtual std::size_t dimension() const = 0;
  // Bound on the total reward of one episode (for concentration bounds).
  virtual double return_range() const { return 1.0; }
  // Bound on a single reward draw.
  virtual double step_range() const { return 1.0; }
  // Bernoulli by default.
  virtual double sample_reward(const StateHandle& s, int a, CounterRng& rng) const {
    const double mean = expected_reward(s, a);
    return mean > 0.0 && rng.bernoulli(mean) ? 1.0 : 0.0;
  }
};

// What a learning algorithm sees: random access to transitions, reward
// samples and features.
class LinearRlOracle {
 public:
  virtual ~LinearRlOracle() = default;
  virtual StateHandle initial_state() = 0;
  virtual bool is_terminal(const StateHandle& s) = 0;
  virtual StateHandle transition(const StateHandle& s, int a) = 0;
  virtual double sample_reward(const StateHandle& s, int a) = 0;
  virtual FeatureVector features(const StateHandle& s, int a) = 0;
  virtual int num_actions() const = 0;
  virtual int horizon() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double return_range() const = 0;
  virtual double step_range() const = 0;
};

struct QueryCounters {
  std::uint64_t transitions = 0;
  std::uint64_t rewards = 0;
  std::uint64_t features = 0;
  std::uint64_t total() const { return transitions + rewards + features; }
};

// Serves a TreeModel through the oracle interface, counting every call.
// The visit hook sees every state handed to the learner and may throw to
// abort the run.
class SimulatedOracle final : public LinearRlOracle {
 public:
  using VisitHook = std::function<void(const StateHandle&)>;

  SimulatedOracle(const TreeModel& model, std::uint64_t seed, VisitHook hook = {})
      : model_(&model), rng_(seed), hook_(std::move(hook)) {}

  StateHandle initial_state() override;
  bool is_terminal(const StateHandle& s) override { return model_->is_terminal(s); }
  StateHandle transition(const StateHandle& s, int a) override;
  double sample_reward(const StateHandle& s, int a) override;
  FeatureVector features(const StateHandle& s, int a) override;
  int num_actions() const override { return model_->num_actions(); }
  int horizon() const override { return model_->horizon(); }
  std::size_t dimension() const override { return model_->dimension(); }
  double return_range() const override { return model_->return_range(); }
  double step_range() const override { return model_->step_range(); }

  const QueryCounters& counters() const noexcept { return counters_; }
  // Optional cap on total queries; exceeding it throws RefusalError.
  void set_query_budget(std::uint64_t budget) { budget_ = budget; }

 private:
  void charge();
  const TreeModel* model_;
  CounterRng rng_;
  VisitHook hook_;
  QueryCounters counters_;
  std::uint64_t budget_ = 0;
};

// The SAT-derived MDP as a TreeModel; handles are MdpState encodings.
class SatMdpModel final : public TreeModel {
 public:
  explicit SatMdpModel(const MdpInstance& inst) : inst_(&inst) {}
  const MdpInstance& instance() const noexcept { return *inst_; }

  StateHandle initial_state() const override;
  bool is_terminal(const StateHandle& s) const override;
  int num_actions() const override { return kNumActions; }
  StateHandle transition(const StateHandle& s, int a) const override;
  double expected_reward(const StateHandle& s, int a) const override;
  FeatureVector features(const StateHandle& s, int a) const override;
  int horizon() const override { return static_cast<int>(inst_->params().H); }
  std::size_t dimension() const override { return inst_->feature_index().dimension(); }

 private:
  const MdpInstance* inst_;
};

// Exhaustive dynamic programming over a TreeModel with memoisation on the
// state handle. Throws RefusalError once more than `node_budget` distinct
// states are expanded.
class ExactDp {
 public:
  explicit ExactDp(const TreeModel& model, std::size_t node_budget = 5'000'000)
      : model_(&model), budget_(node_budget) {}

  double value(const StateHandle& s);
  double q_value(const StateHandle& s, int a);
  // Lowest-index optimal action.
  int best_action(const StateHandle& s);
  std::size_t states_expanded() const noexcept { return v_.size(); }

 private:
  const TreeModel* model_;
  std::size_t budget_;
  std::unordered_map<StateHandle, double> v_;
};

using PolicyFn = std::function<int(const StateHandle&)>;

// Expected return of a deterministic stationary policy, by memoised
// recursion.
class PolicyEvaluator {
 public:
  PolicyEvaluator(const TreeModel& model, PolicyFn policy, std::size_t node_budget = 5'000'000)
      : model_(&model), policy_(std::move(policy)), budget_(node_budget) {}
  double value(const StateHandle& s);

 private:
  const TreeModel* model_;
  PolicyFn policy_;
  std::size_t budget_;
  std::unordered_map<StateHandle, double> v_;
};

// Expected return of a fixed action sequence from s (stops at termination;
// extra actions are ignored).
double path_value(const TreeModel& model, const StateHandle& s, const std::vector<int>& actions);

// Every state reachable from the initial state, in breadth-first order.
std::vector<StateHandle> reachable_states(const TreeModel& model, std::size_t node_budget = 5'000'000);

}  // namespace satmdp
