#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "satmdp/oracle.hpp"

namespace satmdp {

// Cubic lattice spacing * Z^d intersected with the closed unit ball, with
// spacing = radius / sqrt(d) and radius = eps / (2 H sqrt(d)). Truncating
// each coordinate of a point in the ball toward zero lands on a lattice
// point within `radius`, so the lattice is a radius-cover of the ball.
class LatticeCover {
 public:
  LatticeCover(int d, double eps, int H);

  int dimension() const noexcept { return d_; }
  double radius() const noexcept { return radius_; }
  double spacing() const noexcept { return spacing_; }
  // Volume estimate of the point count (unit-ball volume / spacing^d).
  double estimated_size() const;
  // Exact count by enumeration.
  std::uint64_t count() const;

  bool contains(const std::vector<std::int64_t>& z) const;
  // Coordinate-wise truncation toward zero of u / spacing.
  std::vector<std::int64_t> truncate(const std::vector<double>& u) const;
  std::vector<double> point(const std::vector<std::int64_t>& z) const;

  // Visits every lattice point in lexicographic order of integer coordinates.
  void for_each(const std::function<void(const std::vector<double>&)>& fn) const;

 private:
  int d_;
  double radius_;
  double spacing_;
};

struct EpsNetOptions {
  double eps = 0.1;
  double delta = 0.1;
  // Each policy value is estimated to +-(accuracy_fraction * eps).
  double accuracy_fraction = 0.25;
  std::uint64_t cover_budget = 60'000'000;
  std::uint64_t sample_budget = 500'000'000;
};

struct EpsNetResult {
  std::vector<int> actions;  // root-to-leaf action list of the chosen policy
  double value_estimate = 0;
  std::uint64_t cover_size = 0;
  std::size_t distinct_policies = 0;
  std::uint64_t samples_per_policy = 0;
  QueryCounters queries;
};

// For every theta in the lattice cover, follows argmax_a <theta, psi(s, a)>
// (ties to the lowest action) from the initial state; every distinct induced
// path is rolled out n = ceil(R^2 ln(2 |cover| / delta) / (2 t^2)) times and
// the empirically best one is returned. Throws RefusalError with the size
// estimate when the cover exceeds the budget.
EpsNetResult epsilon_net_search(LinearRlOracle& oracle, const EpsNetOptions& opts);

}  // namespace satmdp
