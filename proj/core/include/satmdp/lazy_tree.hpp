#pragma once

#include <deque>
#include <vector>

#include "satmdp/oracle.hpp"

namespace satmdp {

// Tree of states indexed by action strings from a root, expanded on demand
// through an oracle. Each transition and feature query is issued at most once
// per node; two action strings reaching the same state are separate nodes.
class LazyTree {
 public:
  LazyTree(LinearRlOracle& oracle, StateHandle root, int root_depth = 0);

  static constexpr int kRoot = 0;

  bool terminal(int node);
  int child(int node, int a);
  const FeatureVector& psi(int node, int a);
  const StateHandle& handle(int node) const { return nodes_[static_cast<std::size_t>(node)].handle; }
  int depth(int node) const { return nodes_[static_cast<std::size_t>(node)].depth; }
  std::size_t size() const noexcept { return nodes_.size(); }
  int num_actions() const noexcept { return k_; }
  LinearRlOracle& oracle() noexcept { return *oracle_; }

 private:
  struct Node {
    StateHandle handle;
    int depth = 0;
    signed char term = -1;
    std::vector<int> kids;
    std::vector<FeatureVector> psi;
    std::vector<bool> have_psi;
  };
  LinearRlOracle* oracle_;
  int k_;
  std::deque<Node> nodes_;  // stable references across growth
};

}  // namespace satmdp
