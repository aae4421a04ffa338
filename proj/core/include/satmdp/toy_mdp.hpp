#pragma once

#include <cstdint>
#include <vector>

#include "satmdp/oracle.hpp"

namespace satmdp {

// Explicit complete tree of depth H with a planted parameter theta*:
// every psi(s, a) = Q*(s, a) theta* + noise orthogonal to theta*, scaled so
// that ||psi|| <= 1, hence Q*(s, a) = <theta*, psi(s, a)> exactly.
// Handles are the action strings from the root.
class ToyTreeMdp final : public TreeModel {
 public:
  enum class RewardShape {
    TerminalOnly,  // reward only on the last step, mean in [0, 1]
    PerStep,       // every step, mean in [0, 1/H]
  };

  struct Config {
    int d = 2;
    int H = 3;
    int k = 3;  // actions
    RewardShape shape = RewardShape::TerminalOnly;
    bool deterministic = false;  // rewards equal their means
    double noise = 1.0;          // fraction of the admissible orthogonal norm
    std::uint64_t seed = 1;
  };

  explicit ToyTreeMdp(const Config& cfg);
  // All rewards zero.
  static ToyTreeMdp zero_reward(int d, int H, int k, std::uint64_t seed);

  const Config& config() const noexcept { return cfg_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  double optimal_q(const StateHandle& s, int a) const;

  StateHandle initial_state() const override { return {}; }
  bool is_terminal(const StateHandle& s) const override { return static_cast<int>(s.size()) >= cfg_.H; }
  int num_actions() const override { return cfg_.k; }
  StateHandle transition(const StateHandle& s, int a) const override;
  double expected_reward(const StateHandle& s, int a) const override;
  FeatureVector features(const StateHandle& s, int a) const override;
  double sample_reward(const StateHandle& s, int a, CounterRng& rng) const override;
  int horizon() const override { return cfg_.H; }
  std::size_t dimension() const override { return static_cast<std::size_t>(cfg_.d); }
  double return_range() const override { return 1.0; }
  double step_range() const override {
    return cfg_.shape == RewardShape::PerStep ? 1.0 / cfg_.H : 1.0;
  }

 private:
  std::size_t pair_index(const StateHandle& s, int a) const;
  Config cfg_;
  std::vector<double> theta_;
  std::vector<std::size_t> level_offset_;  // first node id at each depth
  std::vector<double> mean_;               // per (node, action)
  std::vector<double> q_;                  // per (node, action)
  std::vector<double> psi_;                // per (node, action), d entries
};

}  // namespace satmdp
