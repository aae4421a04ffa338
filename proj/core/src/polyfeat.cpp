#include "satmdp/polyfeat.hpp"

#include <algorithm>
#include <limits>

#include "satmdp/errors.hpp"

namespace satmdp {

MultilinearPoly MultilinearPoly::constant(double c) {
  MultilinearPoly p;
  p.add_term(0, c);
  return p;
}

MultilinearPoly MultilinearPoly::variable(int i, double coef) {
  if (i < 0 || i >= 64) throw ParameterError("variable index outside [0, 64)");
  MultilinearPoly p;
  p.add_term(Monomial{1} << i, coef);
  return p;
}

int MultilinearPoly::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
  return d;
}

double MultilinearPoly::coefficient(Monomial m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void MultilinearPoly::add_term(Monomial m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultilinearPoly::evaluate(const Assignment& x) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (Monomial r = m; r; r &= r - 1) t *= x[__builtin_ctzll(r)];
    s += t;
  }
  return s;
}

MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b) {
  MultilinearPoly out = a;
  for (const auto& [m, c] : b.terms()) out.add_term(m, c);
  return out;
}

MultilinearPoly poly_scale(const MultilinearPoly& a, double c) {
  MultilinearPoly out;
  if (c == 0.0) return out;
  for (const auto& [m, k] : a.terms()) out.add_term(m, k * c);
  return out;
}

MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b, int degree_cap) {
  MultilinearPoly out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) out.add_term(ma ^ mb, ca * cb);
  for (const auto& [m, c] : out.terms())
    if (monomial_degree(m) > degree_cap)
      throw ParameterError("product has degree " + std::to_string(monomial_degree(m)) + " above cap " +
                           std::to_string(degree_cap));
  return out;
}

namespace {

MultilinearPoly dist_poly(const Assignment& w, const VarSet& free, bool in_free) {
  if (w.size() > 64) throw ParameterError("polynomial features support at most 64 variables");
  MultilinearPoly out;
  int count = 0;
  for (int i = 0; i < w.size(); ++i) {
    if (free.contains(i) != in_free) continue;
    ++count;
    out.add_term(Monomial{1} << i, -0.5 * w[i]);
  }
  out.add_term(0, 0.5 * count);
  return out;
}

}  // namespace

MultilinearPoly dist_free_poly(const Assignment& w, const VarSet& free) { return dist_poly(w, free, true); }

MultilinearPoly dist_used_poly(const Assignment& w, const VarSet& free) { return dist_poly(w, free, false); }

MultilinearPoly taylor_of_linear(int p, double scale, double c, const MultilinearPoly& L, int degree_cap) {
  // u = -(c + L) / scale; T_p(u) = 1 + u(1 + u/2(1 + u/3(...))).
  const MultilinearPoly u = poly_scale(poly_add(MultilinearPoly::constant(c), L), -1.0 / scale);
  MultilinearPoly acc = MultilinearPoly::constant(1.0);
  for (int j = p; j >= 1; --j)
    acc = poly_add(MultilinearPoly::constant(1.0), poly_scale(poly_mul(acc, u, degree_cap), 1.0 / j));
  return acc;
}

MultilinearPoly value_poly(const RewardParams& params, const std::vector<int>& round_dists, std::int64_t n,
                           int within, const Assignment& w, const VarSet& free) {
  const int cap = 2 * params.p;
  double G = 1.0;
  for (std::size_t i = 0; i < round_dists.size(); ++i)
    G *= g(static_cast<std::int64_t>(i) + 1, round_dists[i], params);
  const auto gn = taylor_of_linear(params.p, params.scale(n), within, dist_free_poly(w, free), cap);
  const auto gn1 = taylor_of_linear(params.p, params.scale(n + 1), 0.0, dist_used_poly(w, free), cap);
  return poly_scale(poly_mul(gn, gn1, cap), G);
}

__extension__ using u128 = unsigned __int128;

std::uint64_t feature_dimension(int v, int max_degree) {
  const int top = std::min(v, max_degree);
  u128 total = 0, c = 1;
  for (int i = 0; i <= top; ++i) {
    total += c;
    if (total > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    c = c * static_cast<unsigned>(v - i) / static_cast<unsigned>(i + 1);
  }
  return static_cast<std::uint64_t>(total);
}

FeatureIndex::FeatureIndex(int v, int max_degree) : v_(v), max_degree_(std::min(v, max_degree)) {
  if (v < 0 || v > 64) throw ParameterError("feature index supports 0..64 variables");
  if (max_degree < 0) throw ParameterError("negative degree");
  const std::uint64_t d = feature_dimension(v, max_degree);
  if (d > (std::uint64_t{1} << 26)) throw RefusalError("feature dimension " + std::to_string(d) + " too large");
  masks_.reserve(d);
  std::vector<int> idx;
  for (int k = 0; k <= max_degree_; ++k) {
    // Lexicographic k-subsets of [0, v).
    idx.resize(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) idx[static_cast<std::size_t>(t)] = t;
    while (true) {
      Monomial m = 0;
      for (int t : idx) m |= Monomial{1} << t;
      masks_.push_back(m);
      int t = k - 1;
      while (t >= 0 && idx[static_cast<std::size_t>(t)] == v - k + t) --t;
      if (t < 0) break;
      ++idx[static_cast<std::size_t>(t)];
      for (int u = t + 1; u < k; ++u) idx[static_cast<std::size_t>(u)] = idx[static_cast<std::size_t>(u) - 1] + 1;
    }
  }
  index_.reserve(masks_.size());
  for (std::size_t k = 0; k < masks_.size(); ++k) index_.emplace(masks_[k], k);
}

std::size_t FeatureIndex::index_of(Monomial m) const {
  auto it = index_.find(m);
  if (it == index_.end()) throw ParameterError("monomial outside the feature index");
  return it->second;
}

FeatureVector to_feature_vector(const MultilinearPoly& poly, const FeatureIndex& index) {
  FeatureVector f(index.dimension(), 0.0);
  for (const auto& [m, c] : poly.terms()) f[index.index_of(m)] = c;
  return f;
}

FeatureVector theta_vector(const Assignment& wstar, const FeatureIndex& index) {
  if (wstar.size() != index.num_vars()) throw ParameterError("theta_vector: dimension mismatch");
  FeatureVector t(index.dimension());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double s = 1.0;
    for (Monomial r = index.monomial(k); r; r &= r - 1) s *= wstar[__builtin_ctzll(r)];
    t[k] = s;
  }
  return t;
}

double inner_product(const FeatureVector& f, const FeatureVector& t) {
  if (f.size() != t.size()) throw ParameterError("inner_product: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * t[k];
  return s;
}

}  // namespace satmdp
