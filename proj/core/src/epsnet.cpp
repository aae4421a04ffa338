#include "satmdp/epsnet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "satmdp/errors.hpp"
#include "satmdp/lazy_tree.hpp"

namespace satmdp {

LatticeCover::LatticeCover(int d, double eps, int H) : d_(d) {
  if (d < 1) throw ParameterError("cover dimension must be positive");
  if (!(eps > 0) || H < 1) throw ParameterError("cover needs eps > 0 and H >= 1");
  radius_ = eps / (2.0 * H * std::sqrt(static_cast<double>(d)));
  spacing_ = radius_ / std::sqrt(static_cast<double>(d));
}

double LatticeCover::estimated_size() const {
  const double half_d = d_ / 2.0;
  const double ball = std::pow(std::numbers::pi, half_d) / std::tgamma(half_d + 1.0);
  return ball / std::pow(spacing_, d_);
}

namespace {

constexpr double kBallSlack = 1e-12;

// Enumerates integer vectors z with sum (z_i s)^2 <= 1 coordinate by coordinate.
template <class Fn>
void enumerate(int d, double s, int i, double used, std::vector<std::int64_t>& z, std::vector<double>& x, Fn& fn) {
  if (i == d) {
    fn(x);
    return;
  }
  const double room = 1.0 + kBallSlack - used;
  const auto top = static_cast<std::int64_t>(std::floor(std::sqrt(std::max(0.0, room)) / s));
  for (std::int64_t k = -top; k <= top; ++k) {
    const double xi = static_cast<double>(k) * s;
    const double next = used + xi * xi;
    if (next > 1.0 + kBallSlack) continue;
    z[static_cast<std::size_t>(i)] = k;
    x[static_cast<std::size_t>(i)] = xi;
    enumerate(d, s, i + 1, next, z, x, fn);
  }
}

}  // namespace

std::uint64_t LatticeCover::count() const {
  std::uint64_t n = 0;
  auto fn = [&n](const std::vector<double>&) { ++n; };
  std::vector<std::int64_t> z(static_cast<std::size_t>(d_));
  std::vector<double> x(static_cast<std::size_t>(d_));
  enumerate(d_, spacing_, 0, 0.0, z, x, fn);
  return n;
}

bool LatticeCover::contains(const std::vector<std::int64_t>& z) const {
  if (static_cast<int>(z.size()) != d_) return false;
  double used = 0;
  for (auto k : z) {
    const double xi = static_cast<double>(k) * spacing_;
    used += xi * xi;
  }
  return used <= 1.0 + kBallSlack;
}

std::vector<std::int64_t> LatticeCover::truncate(const std::vector<double>& u) const {
  std::vector<std::int64_t> z;
  z.reserve(u.size());
  for (double e : u) z.push_back(static_cast<std::int64_t>(std::trunc(e / spacing_)));
  return z;
}

std::vector<double> LatticeCover::point(const std::vector<std::int64_t>& z) const {
  std::vector<double> x;
  x.reserve(z.size());
  for (auto k : z) x.push_back(static_cast<double>(k) * spacing_);
  return x;
}

void LatticeCover::for_each(const std::function<void(const std::vector<double>&)>& fn) const {
  std::vector<std::int64_t> z(static_cast<std::size_t>(d_));
  std::vector<double> x(static_cast<std::size_t>(d_));
  enumerate(d_, spacing_, 0, 0.0, z, x, fn);
}

EpsNetResult epsilon_net_search(LinearRlOracle& oracle, const EpsNetOptions& opts) {
  if (!(opts.eps > 0 && opts.eps < 1)) throw ParameterError("eps must lie in (0, 1)");
  if (!(opts.delta > 0 && opts.delta < 1)) throw ParameterError("delta must lie in (0, 1)");
  const int d = static_cast<int>(oracle.dimension());
  const int H = oracle.horizon();
  const int k = oracle.num_actions();
  const LatticeCover cover(d, opts.eps, H);
  const double est = cover.estimated_size();
  if (est > static_cast<double>(opts.cover_budget))
    throw RefusalError("lattice cover needs about " + std::to_string(static_cast<std::uint64_t>(est)) +
                       " points, above the budget of " + std::to_string(opts.cover_budget));

  LazyTree tree(oracle, oracle.initial_state());
  // Flat copy of every expanded node: terminal flag, children and psi rows.
  std::vector<signed char> term;
  std::vector<int> kids;
  std::vector<double> psi;
  auto expand = [&](int node) {
    const auto need = static_cast<std::size_t>(node) + 1;
    if (term.size() < need) {
      term.resize(need, -1);
      kids.resize(need * static_cast<std::size_t>(k), -1);
      psi.resize(need * static_cast<std::size_t>(k * d), 0.0);
    }
    auto& t = term[static_cast<std::size_t>(node)];
    if (t >= 0) return;
    t = tree.terminal(node) ? 1 : 0;
    if (t) return;
    for (int a = 0; a < k; ++a) {
      kids[static_cast<std::size_t>(node * k + a)] = tree.child(node, a);
      const auto& row = tree.psi(node, a);
      std::copy(row.begin(), row.end(), psi.begin() + static_cast<std::ptrdiff_t>((node * k + a) * d));
    }
  };

  // Distinct induced paths, keyed by leaf node (one leaf per action string).
  std::map<int, std::uint64_t> leaves;
  int last_leaf = -1;
  std::uint64_t run = 0;
  std::uint64_t cover_size = 0;
  auto visit = [&](const std::vector<double>& theta) {
    ++cover_size;
    int node = LazyTree::kRoot;
    for (;;) {
      expand(node);
      if (term[static_cast<std::size_t>(node)]) break;
      int arg = 0;
      double best = 0;
      const double* row = psi.data() + static_cast<std::ptrdiff_t>(node * k * d);
      for (int a = 0; a < k; ++a, row += d) {
        double dot = 0;
        for (int i = 0; i < d; ++i) dot += theta[static_cast<std::size_t>(i)] * row[i];
        if (a == 0 || dot > best) {
          best = dot;
          arg = a;
        }
      }
      node = kids[static_cast<std::size_t>(node * k + arg)];
    }
    // Neighbouring lattice points mostly share a path; batch the counts.
    if (node != last_leaf) {
      if (last_leaf >= 0) leaves[last_leaf] += run;
      last_leaf = node;
      run = 0;
    }
    ++run;
  };
  {
    std::vector<std::int64_t> z(static_cast<std::size_t>(d));
    std::vector<double> x(static_cast<std::size_t>(d));
    enumerate(d, cover.spacing(), 0, 0.0, z, x, visit);
    if (last_leaf >= 0) leaves[last_leaf] += run;
  }
  // Recover each leaf's action string from the parent links.
  std::vector<int> parent(tree.size(), -1), via(tree.size(), -1);
  for (std::size_t n = 0; n < term.size(); ++n)
    if (term[n] == 0)
      for (int a = 0; a < k; ++a) {
        const int c = kids[n * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)];
        parent[static_cast<std::size_t>(c)] = static_cast<int>(n);
        via[static_cast<std::size_t>(c)] = a;
      }
  std::map<std::vector<int>, std::uint64_t> paths;
  for (const auto& [leaf, cnt] : leaves) {
    std::vector<int> acts;
    for (int n = leaf; n != LazyTree::kRoot; n = parent[static_cast<std::size_t>(n)])
      acts.push_back(via[static_cast<std::size_t>(n)]);
    std::reverse(acts.begin(), acts.end());
    paths[acts] += cnt;
  }

  const double R = oracle.return_range();
  const double t = opts.accuracy_fraction * opts.eps;
  const double delta_each = opts.delta / static_cast<double>(cover_size);
  const auto n = static_cast<std::uint64_t>(std::ceil(R * R * std::log(2.0 / delta_each) / (2.0 * t * t)));
  std::uint64_t planned = 0;
  for (const auto& [p, cnt] : paths) planned += n * p.size();
  if (planned > opts.sample_budget)
    throw RefusalError("policy evaluation needs " + std::to_string(planned) + " reward samples, above the budget");

  EpsNetResult res;
  res.cover_size = cover_size;
  res.distinct_policies = paths.size();
  res.samples_per_policy = n;
  bool first = true;
  for (const auto& [p, cnt] : paths) {
    // States along the path are already cached in the tree.
    std::vector<StateHandle> states;
    int node = LazyTree::kRoot;
    for (int a : p) {
      states.push_back(tree.handle(node));
      node = tree.child(node, a);
    }
    double sum = 0;
    for (std::uint64_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < p.size(); ++s) sum += oracle.sample_reward(states[s], p[s]);
    const double mean = sum / static_cast<double>(n);
    if (first || mean > res.value_estimate) {
      res.value_estimate = mean;
      res.actions = p;
      first = false;
    }
  }
  return res;
}

}  // namespace satmdp
