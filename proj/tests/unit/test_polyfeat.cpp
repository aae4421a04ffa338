#include <gtest/gtest.h>

#include <cmath>

#include "satmdp/errors.hpp"
#include "satmdp/polyfeat.hpp"
#include "satmdp/rng.hpp"

using namespace satmdp;

namespace {

Assignment random_assignment(int v, CounterRng& rng) {
  Assignment a(v);
  for (int i = 0; i < v; ++i) a.set(i, rng.bernoulli(0.5));
  return a;
}

VarSet random_set(int v, CounterRng& rng) {
  VarSet s(v);
  for (int i = 0; i < v; ++i)
    if (rng.bernoulli(0.5)) s.insert(i);
  return s;
}

}  // namespace

TEST(Poly, ProductUsesSymmetricDifference) {
  const auto x0 = MultilinearPoly::variable(0);
  const auto x1 = MultilinearPoly::variable(1, 2.0);
  const auto p = poly_mul(poly_add(x0, x1), x0, 4);  // x0^2 + 2 x0 x1 = 1 + 2 x0 x1
  EXPECT_DOUBLE_EQ(p.coefficient(0), 1.0);
  EXPECT_DOUBLE_EQ(p.coefficient(0b11), 2.0);
  EXPECT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.degree(), 2);
}

TEST(Poly, CancellationDropsTerms) {
  auto p = MultilinearPoly::variable(3);
  p.add_term(Monomial{1} << 3, -1.0);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(poly_scale(MultilinearPoly::constant(2.0), 0.0), MultilinearPoly{});
}

TEST(Poly, DegreeCapIsEnforced) {
  const auto a = poly_mul(MultilinearPoly::variable(0), MultilinearPoly::variable(1), 2);
  EXPECT_THROW(poly_mul(a, MultilinearPoly::variable(2), 2), ParameterError);
}

TEST(Poly, EvaluationMatchesProductOfEvaluations) {
  CounterRng rng(3);
  for (int t = 0; t < 50; ++t) {
    MultilinearPoly a, b;
    for (int k = 0; k < 4; ++k) {
      a.add_term(rng.below(64), rng.uniform() - 0.5);
      b.add_term(rng.below(64), rng.uniform() - 0.5);
    }
    const Assignment x = random_assignment(6, rng);
    EXPECT_NEAR(poly_mul(a, b, 6).evaluate(x), a.evaluate(x) * b.evaluate(x), 1e-12);
    EXPECT_NEAR(poly_add(a, b).evaluate(x), a.evaluate(x) + b.evaluate(x), 1e-12);
  }
}

TEST(DistPoly, EvaluatesToHammingDistanceOnTheSet) {
  CounterRng rng(9);
  for (int t = 0; t < 100; ++t) {
    const int v = 1 + static_cast<int>(rng.below(10));
    const Assignment w = random_assignment(v, rng);
    const Assignment x = random_assignment(v, rng);
    const VarSet s = random_set(v, rng);
    int on = 0, off = 0;
    for (int i = 0; i < v; ++i)
      if (w[i] != x[i]) (s.contains(i) ? on : off)++;
    EXPECT_DOUBLE_EQ(dist_free_poly(w, s).evaluate(x), on);
    EXPECT_DOUBLE_EQ(dist_used_poly(w, s).evaluate(x), off);
  }
}

TEST(TaylorOfLinear, MatchesScalarTaylor) {
  CounterRng rng(5);
  for (int t = 0; t < 50; ++t) {
    const int v = 6;
    const Assignment w = random_assignment(v, rng);
    const VarSet s = random_set(v, rng);
    const Assignment x = random_assignment(v, rng);
    const auto L = dist_free_poly(w, s);
    const int p = 1 + static_cast<int>(rng.below(3));
    const auto T = taylor_of_linear(p, 7.5, 2.0, L, 2 * p);
    EXPECT_NEAR(T.evaluate(x), taylor_exp(p, -(2.0 + L.evaluate(x)) / 7.5), 1e-12);
    EXPECT_LE(T.degree(), p);
  }
}

TEST(FeatureIndex, CanonicalOrder) {
  const FeatureIndex idx(4, 2);
  ASSERT_EQ(idx.dimension(), 11u);
  EXPECT_EQ(idx.monomial(0), 0u);
  EXPECT_EQ(idx.monomial(1), 0b0001u);
  EXPECT_EQ(idx.monomial(4), 0b1000u);
  EXPECT_EQ(idx.monomial(5), 0b0011u);
  EXPECT_EQ(idx.monomial(6), 0b0101u);
  EXPECT_EQ(idx.monomial(10), 0b1100u);
  for (std::size_t k = 0; k < idx.dimension(); ++k) EXPECT_EQ(idx.index_of(idx.monomial(k)), k);
  EXPECT_THROW(idx.index_of(0b0111), ParameterError);
}

TEST(FeatureIndex, Dimensions) {
  EXPECT_EQ(FeatureIndex::for_taylor_degree(5, 2).dimension(), 31u);
  EXPECT_EQ(FeatureIndex::for_taylor_degree(7, 2).dimension(), 99u);
  EXPECT_EQ(feature_dimension(5, 4), 31u);
  EXPECT_EQ(feature_dimension(7, 4), 99u);
  EXPECT_EQ(feature_dimension(3, 10), 8u);
  EXPECT_EQ(feature_dimension(200, 200), UINT64_MAX);
}

TEST(Theta, InnerProductEvaluatesPolynomial) {
  CounterRng rng(11);
  const FeatureIndex idx(6, 4);
  for (int t = 0; t < 30; ++t) {
    MultilinearPoly p;
    for (int k = 0; k < 6; ++k) p.add_term(idx.monomial(rng.below(idx.dimension())), rng.uniform());
    const Assignment w = random_assignment(6, rng);
    EXPECT_NEAR(inner_product(to_feature_vector(p, idx), theta_vector(w, idx)), p.evaluate(w), 1e-12);
  }
}

TEST(Theta, EntriesAreSignProducts) {
  const FeatureIndex idx(3, 3);
  const auto th = theta_vector(Assignment::from_string("101"), idx);
  EXPECT_DOUBLE_EQ(th[idx.index_of(0)], 1.0);
  EXPECT_DOUBLE_EQ(th[idx.index_of(0b010)], -1.0);
  EXPECT_DOUBLE_EQ(th[idx.index_of(0b011)], -1.0);
  EXPECT_DOUBLE_EQ(th[idx.index_of(0b101)], 1.0);
  EXPECT_THROW(to_feature_vector(MultilinearPoly::variable(5), idx), ParameterError);
}
