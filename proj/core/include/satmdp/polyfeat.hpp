#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "satmdp/cnf.hpp"
#include "satmdp/reward.hpp"

namespace satmdp {

// Subset of variable indices as a bitmask; bit i is variable i (v <= 64).
using Monomial = std::uint64_t;

inline int monomial_degree(Monomial m) { return __builtin_popcountll(m); }

// Polynomial over x in {-1,1}^v. Since x_i^2 = 1 every monomial is a plain
// subset and products combine by symmetric difference.
class MultilinearPoly {
 public:
  MultilinearPoly() = default;
  static MultilinearPoly constant(double c);
  static MultilinearPoly variable(int i, double coef = 1.0);

  const std::map<Monomial, double>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const;
  double coefficient(Monomial m) const;
  // Adds c to the coefficient of m, dropping it if the result is exactly 0.
  void add_term(Monomial m, double c);

  // x[i] in {-1,+1}.
  double evaluate(const Assignment& x) const;

  friend bool operator==(const MultilinearPoly&, const MultilinearPoly&) = default;

 private:
  std::map<Monomial, double> terms_;
};

MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly poly_scale(const MultilinearPoly& a, double c);
// Throws ParameterError when a surviving monomial exceeds degree_cap.
MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b, int degree_cap);

// (|S| - sum_{i in S} w_i x_i) / 2: Hamming distance between w and x on S.
MultilinearPoly dist_free_poly(const Assignment& w, const VarSet& free);
// Same over the complement of S.
MultilinearPoly dist_used_poly(const Assignment& w, const VarSet& free);

// T_p(-(c + L) / scale) expanded, with L a linear polynomial.
MultilinearPoly taylor_of_linear(int p, double scale, double c, const MultilinearPoly& L, int degree_cap);

// Value of the distance-minimising completion from a state, as a polynomial
// in the unknown target x:
//   G * g_n(within + Dfree(x)) * g_{n+1}(Dused(x)),  G = prod_{i<n} g_i(round_dists[i-1]).
// Evaluated at a terminal state it is the expected terminal reward.
MultilinearPoly value_poly(const RewardParams& params, const std::vector<int>& round_dists, std::int64_t n,
                           int within, const Assignment& w, const VarSet& free);

// Canonical enumeration of subsets of [0, v) with size <= max_degree: by
// size, then lexicographically on the sorted index list.
class FeatureIndex {
 public:
  FeatureIndex(int v, int max_degree);
  // Index over monomials of degree <= min(2p, v).
  static FeatureIndex for_taylor_degree(int v, int p) { return FeatureIndex(v, 2 * p); }

  int num_vars() const noexcept { return v_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t dimension() const noexcept { return masks_.size(); }
  Monomial monomial(std::size_t k) const { return masks_[k]; }
  // Throws ParameterError for a monomial outside the index.
  std::size_t index_of(Monomial m) const;

 private:
  int v_;
  int max_degree_;
  std::vector<Monomial> masks_;
  std::unordered_map<Monomial, std::size_t> index_;
};

// sum_{i <= min(max_degree, v)} C(v, i); saturates at UINT64_MAX.
std::uint64_t feature_dimension(int v, int max_degree);

using FeatureVector = std::vector<double>;

FeatureVector to_feature_vector(const MultilinearPoly& poly, const FeatureIndex& index);
// Entry for subset S is prod_{i in S} wstar_i.
FeatureVector theta_vector(const Assignment& wstar, const FeatureIndex& index);
double inner_product(const FeatureVector& f, const FeatureVector& t);

}  // namespace satmdp
