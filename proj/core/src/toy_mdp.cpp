#include "satmdp/toy_mdp.hpp"

#include <cmath>
#include <random>

#include "satmdp/errors.hpp"

namespace satmdp {

namespace {

std::vector<double> gaussian_vector(int d, CounterRng& rng) {
  std::normal_distribution<double> n01;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (auto& e : x) e = n01(rng);
  return x;
}

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double e : x) s += e * e;
  return std::sqrt(s);
}

}  // namespace

ToyTreeMdp::ToyTreeMdp(const Config& cfg) : cfg_(cfg) {
  if (cfg.d < 1 || cfg.H < 1 || cfg.k < 1) throw ParameterError("toy MDP needs d, H, k >= 1");
  if (cfg.noise < 0 || cfg.noise > 1) throw ParameterError("noise fraction must lie in [0, 1]");
  double nodes = 0;
  for (int t = 0; t < cfg.H; ++t) nodes += std::pow(cfg.k, t);
  if (nodes * cfg.k > 2e7) throw RefusalError("toy tree too large");

  CounterRng rng(cfg.seed, 0x70790001);
  do theta_ = gaussian_vector(cfg.d, rng);
  while (norm(theta_) < 1e-6);
  const double tn = norm(theta_);
  for (auto& e : theta_) e /= tn;

  level_offset_.assign(static_cast<std::size_t>(cfg.H + 1), 0);
  std::size_t width = 1;
  for (int t = 0; t < cfg.H; ++t) {
    level_offset_[static_cast<std::size_t>(t) + 1] = level_offset_[static_cast<std::size_t>(t)] + width;
    width *= static_cast<std::size_t>(cfg.k);
  }
  const std::size_t internal = level_offset_.back();
  const std::size_t pairs = internal * static_cast<std::size_t>(cfg.k);
  mean_.assign(pairs, 0.0);
  q_.assign(pairs, 0.0);
  psi_.assign(pairs * static_cast<std::size_t>(cfg.d), 0.0);

  for (std::size_t p = 0; p < pairs; ++p) {
    const std::size_t node = p / static_cast<std::size_t>(cfg.k);
    const bool last = node >= level_offset_[static_cast<std::size_t>(cfg.H) - 1];
    if (cfg.shape == RewardShape::PerStep) mean_[p] = rng.uniform() / cfg.H;
    else if (last) mean_[p] = rng.uniform();
  }
  // Q* bottom-up; children of node n at depth t: offset(t+1) + (n - offset(t)) k + a.
  for (int t = cfg.H - 1; t >= 0; --t) {
    for (std::size_t n = level_offset_[static_cast<std::size_t>(t)]; n < level_offset_[static_cast<std::size_t>(t) + 1]; ++n)
      for (int a = 0; a < cfg.k; ++a) {
        const std::size_t p = n * static_cast<std::size_t>(cfg.k) + static_cast<std::size_t>(a);
        double vnext = 0.0;
        if (t + 1 < cfg.H) {
          const std::size_t child = level_offset_[static_cast<std::size_t>(t) + 1] +
                                    (n - level_offset_[static_cast<std::size_t>(t)]) * static_cast<std::size_t>(cfg.k) +
                                    static_cast<std::size_t>(a);
          vnext = -1e300;
          for (int b = 0; b < cfg.k; ++b)
            vnext = std::max(vnext, q_[child * static_cast<std::size_t>(cfg.k) + static_cast<std::size_t>(b)]);
        }
        q_[p] = mean_[p] + vnext;
      }
  }
  for (std::size_t p = 0; p < pairs; ++p) {
    double* psi = psi_.data() + p * static_cast<std::size_t>(cfg.d);
    const double q = q_[p];
    auto u = gaussian_vector(cfg.d, rng);
    double dot = 0;
    for (int i = 0; i < cfg.d; ++i) dot += u[static_cast<std::size_t>(i)] * theta_[static_cast<std::size_t>(i)];
    for (int i = 0; i < cfg.d; ++i) u[static_cast<std::size_t>(i)] -= dot * theta_[static_cast<std::size_t>(i)];
    const double un = norm(u);
    const double room = std::sqrt(std::max(0.0, 1.0 - q * q)) * cfg.noise * rng.uniform();
    for (int i = 0; i < cfg.d; ++i) {
      psi[i] = q * theta_[static_cast<std::size_t>(i)];
      if (un > 1e-12) psi[i] += room * u[static_cast<std::size_t>(i)] / un;
    }
  }
}

ToyTreeMdp ToyTreeMdp::zero_reward(int d, int H, int k, std::uint64_t seed) {
  Config c;
  c.d = d;
  c.H = H;
  c.k = k;
  c.seed = seed;
  ToyTreeMdp m(c);
  std::fill(m.mean_.begin(), m.mean_.end(), 0.0);
  std::fill(m.q_.begin(), m.q_.end(), 0.0);
  // Keep the orthogonal noise so policies still differ in their features.
  for (std::size_t p = 0; p < m.q_.size(); ++p) {
    double* psi = m.psi_.data() + p * static_cast<std::size_t>(d);
    double dot = 0;
    for (int i = 0; i < d; ++i) dot += psi[i] * m.theta_[static_cast<std::size_t>(i)];
    for (int i = 0; i < d; ++i) psi[i] -= dot * m.theta_[static_cast<std::size_t>(i)];
  }
  return m;
}

std::size_t ToyTreeMdp::pair_index(const StateHandle& s, int a) const {
  const int t = static_cast<int>(s.size());
  if (t >= cfg_.H) throw UsageError("toy MDP: action at a terminal state");
  if (a < 0 || a >= cfg_.k) throw UsageError("toy MDP: action out of range");
  std::size_t idx = 0;
  for (char c : s) idx = idx * static_cast<std::size_t>(cfg_.k) + static_cast<unsigned char>(c);
  const std::size_t node = level_offset_[static_cast<std::size_t>(t)] + idx;
  return node * static_cast<std::size_t>(cfg_.k) + static_cast<std::size_t>(a);
}

StateHandle ToyTreeMdp::transition(const StateHandle& s, int a) const {
  (void)pair_index(s, a);
  StateHandle t = s;
  t.push_back(static_cast<char>(a));
  return t;
}

double ToyTreeMdp::expected_reward(const StateHandle& s, int a) const { return mean_[pair_index(s, a)]; }

double ToyTreeMdp::optimal_q(const StateHandle& s, int a) const { return q_[pair_index(s, a)]; }

FeatureVector ToyTreeMdp::features(const StateHandle& s, int a) const {
  const std::size_t p = pair_index(s, a);
  const double* psi = psi_.data() + p * static_cast<std::size_t>(cfg_.d);
  return FeatureVector(psi, psi + cfg_.d);
}

double ToyTreeMdp::sample_reward(const StateHandle& s, int a, CounterRng& rng) const {
  const double mean = expected_reward(s, a);
  if (cfg_.deterministic) return mean;
  const double top = step_range();
  return mean > 0.0 && rng.bernoulli(mean / top) ? top : 0.0;
}

}  // namespace satmdp
