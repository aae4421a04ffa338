#pragma once

#include <cstdint>
#include <vector>

#include "satmdp/agents.hpp"
#include "satmdp/oracle.hpp"

namespace satmdp {

// The coefficient system for a basis expansion has no solution within the
// residual tolerance.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HorizonSplitOptions {
  // Multiplies every Hoeffding sample count (1 = full counts).
  double sample_scale = 1.0;
  std::uint64_t sample_budget = 2'000'000'000;
  std::uint64_t path_budget = 1'000'000;
  double independence_tol = 1e-10;
  double residual_tol = 1e-8;
};

struct LevelDiagnostics {
  int depth = 0;                  // absolute depth of the level's states
  std::size_t candidates = 0;     // |B-bar_j|
  std::size_t basis_size = 0;     // |B_j|
  double max_residual = 0;        // worst expansion residual of a candidate
  double amplification = 0;       // max ||alpha||_1 over candidates
  double accuracy = 0;            // per-path reward accuracy t_j
  std::size_t paths = 0;          // segment paths rolled out from B_j
  std::uint64_t samples_per_path = 0;
};

struct HorizonSplitResult {
  std::vector<double> q;  // estimate for each action at the start state
  int segment_length = 0;
  std::vector<LevelDiagnostics> levels;
  std::uint64_t reward_samples = 0;
};

// Estimates Q*(s, .) at a state of absolute depth `depth`. The remaining
// horizon R = H - depth is cut into segments of length L = ceil(sqrt(R));
// level j holds the state-action pairs at relative depth jL reachable from
// the level j-1 basis, and its basis is a maximal linearly independent
// subset of them. Every candidate's feature vector is expanded in its
// level's basis by least squares. Path rewards inside a segment are
// estimated by sampling, with accuracies shrunk by the measured expansion
// amplification so that the start-state error stays within `target` with
// probability 1 - delta.
HorizonSplitResult horizon_split_q(LinearRlOracle& oracle, const StateHandle& s, int depth, double target,
                                   double delta, const HorizonSplitOptions& opts = {});

struct HorizonSplitPolicy {
  QEstimate q;                 // entries at every visited state
  std::vector<int> actions;    // the greedy path taken
  std::vector<LevelDiagnostics> levels;  // concatenated over visited states
  std::uint64_t reward_samples = 0;
};

// Walks from the initial state, estimating Q at each visited state to
// eps / (2H) with confidence delta / H and taking the argmax action.
HorizonSplitPolicy horizon_split_policy(LinearRlOracle& oracle, double eps, double delta,
                                        const HorizonSplitOptions& opts = {});

}  // namespace satmdp
