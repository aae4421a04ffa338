#include "satmdp/lazy_tree.hpp"

#include "satmdp/errors.hpp"

namespace satmdp {

LazyTree::LazyTree(LinearRlOracle& oracle, StateHandle root, int root_depth)
    : oracle_(&oracle), k_(oracle.num_actions()) {
  Node n;
  n.handle = std::move(root);
  n.depth = root_depth;
  nodes_.push_back(std::move(n));
}

bool LazyTree::terminal(int node) {
  auto& n = nodes_[static_cast<std::size_t>(node)];
  if (n.term < 0) n.term = oracle_->is_terminal(n.handle) ? 1 : 0;
  return n.term == 1;
}

int LazyTree::child(int node, int a) {
  if (terminal(node)) throw UsageError("child of a terminal node");
  if (nodes_[static_cast<std::size_t>(node)].kids.empty())
    nodes_[static_cast<std::size_t>(node)].kids.assign(static_cast<std::size_t>(k_), -1);
  int id = nodes_[static_cast<std::size_t>(node)].kids[static_cast<std::size_t>(a)];
  if (id >= 0) return id;
  Node c;
  c.handle = oracle_->transition(nodes_[static_cast<std::size_t>(node)].handle, a);
  c.depth = nodes_[static_cast<std::size_t>(node)].depth + 1;
  id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(c));
  nodes_[static_cast<std::size_t>(node)].kids[static_cast<std::size_t>(a)] = id;
  return id;
}

const FeatureVector& LazyTree::psi(int node, int a) {
  auto& n = nodes_[static_cast<std::size_t>(node)];
  if (n.psi.empty()) {
    n.psi.resize(static_cast<std::size_t>(k_));
    n.have_psi.assign(static_cast<std::size_t>(k_), false);
  }
  if (!n.have_psi[static_cast<std::size_t>(a)]) {
    n.psi[static_cast<std::size_t>(a)] = oracle_->features(n.handle, a);
    n.have_psi[static_cast<std::size_t>(a)] = true;
  }
  return n.psi[static_cast<std::size_t>(a)];
}

}  // namespace satmdp
