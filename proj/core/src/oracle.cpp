#include "satmdp/oracle.hpp"

#include <deque>
#include <unordered_set>

#include "satmdp/errors.hpp"

namespace satmdp {

void SimulatedOracle::charge() {
  if (budget_ && counters_.total() >= budget_) throw RefusalError("oracle query budget exhausted");
}

StateHandle SimulatedOracle::initial_state() {
  StateHandle s = model_->initial_state();
  if (hook_) hook_(s);
  return s;
}

StateHandle SimulatedOracle::transition(const StateHandle& s, int a) {
  charge();
  ++counters_.transitions;
  StateHandle t = model_->transition(s, a);
  if (hook_) hook_(t);
  return t;
}

double SimulatedOracle::sample_reward(const StateHandle& s, int a) {
  charge();
  ++counters_.rewards;
  return model_->sample_reward(s, a, rng_);
}

FeatureVector SimulatedOracle::features(const StateHandle& s, int a) {
  charge();
  ++counters_.features;
  return model_->features(s, a);
}

StateHandle SatMdpModel::initial_state() const { return satmdp::initial_state(*inst_).encode(); }

bool SatMdpModel::is_terminal(const StateHandle& s) const { return decode_state(*inst_, s).terminal(); }

StateHandle SatMdpModel::transition(const StateHandle& s, int a) const {
  return satmdp::transition(*inst_, decode_state(*inst_, s), a).encode();
}

double SatMdpModel::expected_reward(const StateHandle& s, int a) const {
  return reward_mean(*inst_, decode_state(*inst_, s), a);
}

FeatureVector SatMdpModel::features(const StateHandle& s, int a) const {
  return features_state_action(*inst_, decode_state(*inst_, s), a);
}

double ExactDp::value(const StateHandle& s) {
  if (auto it = v_.find(s); it != v_.end()) return it->second;
  if (model_->is_terminal(s)) return v_[s] = 0.0;
  if (v_.size() >= budget_) throw RefusalError("exact DP exceeded its node budget");
  double best = -1e300;
  for (int a = 0; a < model_->num_actions(); ++a) best = std::max(best, q_value(s, a));
  return v_[s] = best;
}

double ExactDp::q_value(const StateHandle& s, int a) {
  return model_->expected_reward(s, a) + value(model_->transition(s, a));
}

int ExactDp::best_action(const StateHandle& s) {
  int arg = 0;
  double best = -1e300;
  for (int a = 0; a < model_->num_actions(); ++a) {
    const double q = q_value(s, a);
    if (q > best) {
      best = q;
      arg = a;
    }
  }
  return arg;
}

double PolicyEvaluator::value(const StateHandle& s) {
  if (auto it = v_.find(s); it != v_.end()) return it->second;
  if (model_->is_terminal(s)) return v_[s] = 0.0;
  if (v_.size() >= budget_) throw RefusalError("policy evaluation exceeded its node budget");
  const int a = policy_(s);
  if (a < 0 || a >= model_->num_actions()) throw UsageError("policy returned an illegal action");
  const double r = model_->expected_reward(s, a) + value(model_->transition(s, a));
  return v_[s] = r;
}

double path_value(const TreeModel& model, const StateHandle& s, const std::vector<int>& actions) {
  StateHandle cur = s;
  double total = 0.0;
  for (int a : actions) {
    if (model.is_terminal(cur)) break;
    total += model.expected_reward(cur, a);
    cur = model.transition(cur, a);
  }
  return total;
}

std::vector<StateHandle> reachable_states(const TreeModel& model, std::size_t node_budget) {
  std::vector<StateHandle> order;
  std::unordered_set<StateHandle> seen;
  std::deque<StateHandle> queue;
  auto root = model.initial_state();
  seen.insert(root);
  queue.push_back(root);
  while (!queue.empty()) {
    StateHandle s = std::move(queue.front());
    queue.pop_front();
    if (!model.is_terminal(s))
      for (int a = 0; a < model.num_actions(); ++a) {
        auto t = model.transition(s, a);
        if (seen.insert(t).second) {
          if (seen.size() > node_budget) throw RefusalError("reachable state set exceeds the node budget");
          queue.push_back(std::move(t));
        }
      }
    order.push_back(std::move(s));
  }
  return order;
}

}  // namespace satmdp
