#include "satmdp/horizon_split.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "satmdp/errors.hpp"
#include "satmdp/lazy_tree.hpp"

namespace satmdp {

namespace {

struct Pair {
  int node;
  int action;
};

struct SegmentPath {
  std::vector<int> nodes;  // state before each step
  std::vector<int> acts;
  int end = -1;
  bool continues = false;  // end is a live state inside the horizon
};

struct Level {
  std::vector<Pair> cand;
  std::map<int, std::size_t> first_cand;  // node -> index of its action 0
  std::vector<std::size_t> basis;          // indices into cand
  std::vector<Eigen::VectorXd> alpha;      // per candidate
  std::vector<std::vector<SegmentPath>> paths;  // per basis element
  LevelDiagnostics diag;
};

Eigen::VectorXd to_eigen(const FeatureVector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Maximal independent subset by column-pivoted Gram-Schmidt: each step takes
// the candidate with the largest residual against the chosen span (lowest
// index on ties) and stops once every residual is within `tol`. Pivoting on
// the residual keeps expansion coefficients small.
std::vector<std::size_t> select_basis(LazyTree& tree, const std::vector<Pair>& cand, std::size_t d, double tol) {
  std::vector<Eigen::VectorXd> res;
  res.reserve(cand.size());
  for (const auto& p : cand) res.push_back(to_eigen(tree.psi(p.node, p.action)));
  std::vector<std::size_t> chosen;
  std::vector<bool> used(cand.size(), false);
  while (chosen.size() < d) {
    std::size_t best = cand.size();
    double best_norm = tol;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (used[i]) continue;
      const double nrm = res[i].norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = i;
      }
    }
    if (best == cand.size()) break;
    used[best] = true;
    chosen.push_back(best);
    const Eigen::VectorXd q = res[best] / best_norm;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (!used[i]) res[i] -= q.dot(res[i]) * q;
  }
  return chosen;
}

void expand(LazyTree& tree, Level& lv, std::size_t d, double residual_tol) {
  const auto nb = static_cast<Eigen::Index>(lv.basis.size());
  Eigen::MatrixXd B(static_cast<Eigen::Index>(d), nb);
  for (Eigen::Index c = 0; c < nb; ++c) {
    const auto& p = lv.cand[lv.basis[static_cast<std::size_t>(c)]];
    B.col(c) = to_eigen(tree.psi(p.node, p.action));
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  lv.alpha.clear();
  for (const auto& p : lv.cand) {
    const Eigen::VectorXd psi = to_eigen(tree.psi(p.node, p.action));
    Eigen::VectorXd a = nb > 0 ? Eigen::VectorXd(qr.solve(psi)) : Eigen::VectorXd(0);
    const double res = nb > 0 ? (B * a - psi).norm() : psi.norm();
    if (!(res <= residual_tol))
      throw SolveError("basis expansion residual " + std::to_string(res) + " at depth " +
                       std::to_string(lv.diag.depth));
    lv.diag.max_residual = std::max(lv.diag.max_residual, res);
    lv.diag.amplification = std::max(lv.diag.amplification, a.lpNorm<1>());
    lv.alpha.push_back(std::move(a));
  }
}

void collect_paths(LazyTree& tree, int node, int boundary, int horizon_end, SegmentPath& cur,
                   std::vector<SegmentPath>& out, std::uint64_t path_budget, std::uint64_t& total) {
  if (tree.terminal(node) || tree.depth(node) >= boundary) {
    if (++total > path_budget) throw RefusalError("segment path enumeration exceeds the path budget");
    SegmentPath done = cur;
    done.end = node;
    done.continues = !tree.terminal(node) && tree.depth(node) < horizon_end;
    out.push_back(std::move(done));
    return;
  }
  for (int a = 0; a < tree.num_actions(); ++a) {
    cur.nodes.push_back(node);
    cur.acts.push_back(a);
    collect_paths(tree, tree.child(node, a), boundary, horizon_end, cur, out, path_budget, total);
    cur.nodes.pop_back();
    cur.acts.pop_back();
  }
}

void add_candidates(LazyTree& tree, Level& lv, int node) {
  if (lv.first_cand.count(node)) return;
  lv.first_cand[node] = lv.cand.size();
  for (int a = 0; a < tree.num_actions(); ++a) lv.cand.push_back({node, a});
}

double dot(const Eigen::VectorXd& alpha, const std::vector<double>& q) {
  double s = 0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) s += alpha[i] * q[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace

HorizonSplitResult horizon_split_q(LinearRlOracle& oracle, const StateHandle& s, int depth, double target,
                                   double delta, const HorizonSplitOptions& opts) {
  if (!(target > 0)) throw ParameterError("target accuracy must be positive");
  if (!(delta > 0 && delta < 1)) throw ParameterError("delta must lie in (0, 1)");
  if (!(opts.sample_scale > 0)) throw ParameterError("sample_scale must be positive");
  const int H = oracle.horizon();
  const int R = H - depth;
  if (R < 1) throw UsageError("no remaining horizon at depth " + std::to_string(depth));
  if (oracle.is_terminal(s)) throw UsageError("Q estimate requested at a terminal state");
  const std::size_t d = oracle.dimension();
  const int k = oracle.num_actions();

  const int L = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(R))));
  const int J = (R + L - 1) / L - 1;
  const int horizon_end = depth + R;

  LazyTree tree(oracle, s, depth);
  std::vector<Level> levels(static_cast<std::size_t>(J + 1));
  std::uint64_t total_paths = 0;

  // Forward pass: candidates, bases, expansions and segment paths.
  add_candidates(tree, levels[0], LazyTree::kRoot);
  for (int j = 0; j <= J; ++j) {
    auto& lv = levels[static_cast<std::size_t>(j)];
    lv.diag.depth = depth + j * L;
    lv.basis = select_basis(tree, lv.cand, d, opts.independence_tol);
    expand(tree, lv, d, opts.residual_tol);
    lv.diag.candidates = lv.cand.size();
    lv.diag.basis_size = lv.basis.size();
    const int boundary = std::min(depth + (j + 1) * L, horizon_end);
    lv.paths.resize(lv.basis.size());
    for (std::size_t b = 0; b < lv.basis.size(); ++b) {
      const Pair p = lv.cand[lv.basis[b]];
      SegmentPath cur;
      cur.nodes.push_back(p.node);
      cur.acts.push_back(p.action);
      collect_paths(tree, tree.child(p.node, p.action), boundary, horizon_end, cur, lv.paths[b], opts.path_budget,
                    total_paths);
      lv.diag.paths += lv.paths[b].size();
      if (j < J)
        for (const auto& path : lv.paths[b])
          if (path.continues) add_candidates(tree, levels[static_cast<std::size_t>(j + 1)], path.end);
    }
  }

  // Accuracy schedule and sample plan.
  const double delta_each = delta / static_cast<double>(std::max<std::uint64_t>(total_paths, 1));
  double amp = 1;
  std::uint64_t planned = 0;
  for (int j = 0; j <= J; ++j) {
    auto& lv = levels[static_cast<std::size_t>(j)];
    amp *= std::max(1.0, lv.diag.amplification);
    lv.diag.accuracy = target / (static_cast<double>(J + 1) * amp);
    std::uint64_t worst = 0;
    for (const auto& group : lv.paths)
      for (const auto& path : group) {
        const double range =
            std::min(oracle.return_range(), static_cast<double>(path.acts.size()) * oracle.step_range());
        const double t = lv.diag.accuracy;
        const double n = std::ceil(opts.sample_scale * range * range * std::log(2.0 / delta_each) / (2.0 * t * t));
        const auto count = static_cast<std::uint64_t>(std::max(1.0, n));
        worst = std::max(worst, count);
        planned += count * path.acts.size();
      }
    lv.diag.samples_per_path = worst;
  }
  if (planned > opts.sample_budget)
    throw RefusalError("horizon split needs " + std::to_string(planned) + " reward samples, above the budget of " +
                       std::to_string(opts.sample_budget));

  HorizonSplitResult res;
  res.segment_length = L;

  // Backward pass over levels.
  std::vector<double> next_q;  // basis Q estimates of level j + 1
  for (int j = J; j >= 0; --j) {
    auto& lv = levels[static_cast<std::size_t>(j)];
    const Level* below = j < J ? &levels[static_cast<std::size_t>(j + 1)] : nullptr;
    std::vector<double> qb(lv.basis.size());
    for (std::size_t b = 0; b < lv.basis.size(); ++b) {
      bool first = true;
      for (const auto& path : lv.paths[b]) {
        const double range =
            std::min(oracle.return_range(), static_cast<double>(path.acts.size()) * oracle.step_range());
        const double t = lv.diag.accuracy;
        const auto n = static_cast<std::uint64_t>(std::max(
            1.0, std::ceil(opts.sample_scale * range * range * std::log(2.0 / delta_each) / (2.0 * t * t))));
        double kappa = 0;
        for (std::size_t st = 0; st < path.acts.size(); ++st) {
          const StateHandle& h = tree.handle(path.nodes[st]);
          double sum = 0;
          for (std::uint64_t r = 0; r < n; ++r) sum += oracle.sample_reward(h, path.acts[st]);
          kappa += sum / static_cast<double>(n);
          res.reward_samples += n;
        }
        double tail = 0;
        if (path.continues) {
          if (!below) throw InvariantViolation("segment path continues past the last level");
          const std::size_t c0 = below->first_cand.at(path.end);
          for (int a = 0; a < k; ++a) {
            const double qa = dot(below->alpha[c0 + static_cast<std::size_t>(a)], next_q);
            if (a == 0 || qa > tail) tail = qa;
          }
        }
        const double val = kappa + tail;
        if (first || val > qb[b]) {
          qb[b] = val;
          first = false;
        }
      }
    }
    next_q = std::move(qb);
  }

  const auto& top = levels[0];
  res.q.resize(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) res.q[static_cast<std::size_t>(a)] = dot(top.alpha[static_cast<std::size_t>(a)], next_q);
  for (const auto& lv : levels) res.levels.push_back(lv.diag);
  return res;
}

HorizonSplitPolicy horizon_split_policy(LinearRlOracle& oracle, double eps, double delta,
                                        const HorizonSplitOptions& opts) {
  if (!(eps > 0)) throw ParameterError("eps must be positive");
  const int H = oracle.horizon();
  HorizonSplitPolicy out;
  StateHandle s = oracle.initial_state();
  for (int depth = 0; depth < H && !oracle.is_terminal(s); ++depth) {
    auto r = horizon_split_q(oracle, s, depth, eps / (2.0 * H), delta / H, opts);
    int arg = 0;
    for (int a = 0; a < oracle.num_actions(); ++a) {
      out.q[{s, a}] = r.q[static_cast<std::size_t>(a)];
      if (r.q[static_cast<std::size_t>(a)] > r.q[static_cast<std::size_t>(arg)]) arg = a;
    }
    out.actions.push_back(arg);
    out.levels.insert(out.levels.end(), r.levels.begin(), r.levels.end());
    out.reward_samples += r.reward_samples;
    s = oracle.transition(s, arg);
  }
  return out;
}

}  // namespace satmdp
