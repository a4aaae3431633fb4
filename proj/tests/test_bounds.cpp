#include <cmath>
#include <random>

#include "apdisc/bounds.hpp"
#include "apdisc/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apdisc;

namespace {
BoundParams params(std::vector<Coord> dims, std::int64_t m, std::int64_t s) {
  BoundParams p;
  p.shape = GridShape(std::move(dims));
  p.m = m;
  p.s = s;
  return p;
}
}  // namespace

TEST_CASE("bound_f_simple") {
  CHECK(bound_f_simple(params({8}, 8, 2)) == doctest::Approx(80));
  // s = 1 dominates |X|.
  CHECK(bound_f_simple(params({3, 5}, 7, 1)) >= 7);
  CHECK_THROWS_AS(bound_f_simple(params({8}, 8, 16)), HypothesisError);

  std::mt19937_64 rng(11);
  const GridShape shape({8, 8});
  for (int t = 0; t < 30; ++t) {
    const auto X = oracle::random_subset(shape, rng, 0.5);
    for (Coord s : {1, 2, 4, 8})
      CHECK(oracle::f_count(shape, X, s) <=
            bound_f_simple(params({8, 8}, static_cast<std::int64_t>(X.size()), s)));
  }
}

TEST_CASE("bound_U_box") {
  CHECK(bound_U_box(params({8}, 8, 2)) == doctest::Approx(136));
  CHECK_THROWS_AS(bound_U_box(params({8}, 8, 1)), HypothesisError);
  // s - 1 > N_i on every axis: nothing to count.
  CHECK(u_sum_two_signed(GridShape({3, 3}), std::vector<char>(9, 1), 5) == 0);

  std::mt19937_64 rng(12);
  const GridShape shape({6, 6});
  for (int t = 0; t < 30; ++t) {
    const auto X = oracle::random_subset(shape, rng, 0.5);
    const auto mask = oracle::as_mask(shape, X);
    for (Coord s : {2, 3, 4}) {
      const auto u = u_sum_two_signed(shape, mask, s);
      CHECK(u == oracle::u_sum(shape, X, s));
      CHECK(static_cast<double>(u) <=
            bound_U_box(params({6, 6}, static_cast<std::int64_t>(X.size()), s)));
    }
  }
}

TEST_CASE("refined window and bound") {
  auto p = params({16, 16}, 256, 1);
  const auto w = refined_window(p);
  CHECK(w.shape_condition);
  CHECK(w.lower == doctest::Approx(std::pow(256.0, 1.0 / 3)));
  CHECK(w.upper == doctest::Approx(16));
  p.s = w.s_min;
  const double expect = std::pow(2.0, 8) * 25 * 256 * 256 / std::pow(double(w.s_min), 2);
  CHECK(bound_U_refined(p) == doctest::Approx(expect));

  p.s = w.s_max + 1;
  CHECK_THROWS_AS(bound_U_refined(p), WindowError);
  auto thin = params({64, 2}, 64, 4);
  CHECK_THROWS_AS(bound_U_refined(thin), ShapeConditionError);
}

TEST_CASE("small-gcd counting") {
  const std::vector<std::int64_t> n{10, 10};
  CHECK(bound_small_gcd_count(n, 0.1) == doctest::Approx(360));
  const auto c = count_small_gcd_points(n, 1, 10);
  CHECK(c == oracle::small_gcd_count({10, 10}, 1, 10));
  CHECK(c <= 360);
  CHECK(small_gcd_bound_holds(n, 1, 10));
  // eps = 1 with n_i = 1.
  const std::vector<std::int64_t> ones{1, 1};
  CHECK(count_small_gcd_points(ones, 1, 1) <= 36);
  // A zero entry counts iff the other coordinate passes.
  CHECK(oracle::small_gcd_count({10, 10}, 1, 10) == c);
  CHECK_THROWS_AS(bound_small_gcd_count(n, 0.05), HypothesisError);
}

TEST_CASE("cauchy_schwarz_check") {
  const auto one = cauchy_schwarz_check(10, {{1, 2, 3}});
  CHECK(one.lhs == 3);
  CHECK(one.rhs == doctest::Approx(0.9));
  CHECK(one.holds);
  std::vector<std::int64_t> X(20);
  for (int i = 0; i < 20; ++i) X[i] = i;
  const auto eq = cauchy_schwarz_check(20, {X, X, X});
  CHECK(eq.lhs == 180);
  CHECK(eq.equality);
  CHECK_THROWS_AS(cauchy_schwarz_check(0, {}), InputError);
}

TEST_CASE("ms_base_bound") {
  CHECK(ms_base_bound(100, 4, 10) == doctest::Approx(8));
  CHECK(ms_base_bound(100, 0, 1) == 0);
  CHECK_THROWS_AS(ms_base_bound(100, 4, 9), HypothesisError);
}

TEST_CASE("max_subset_root and bound_report") {
  CHECK(max_subset_root(GridShape({16, 16})).R == doctest::Approx(std::pow(256.0, 1.0 / 6)));
  const auto r = max_subset_root(GridShape({1, 1, 8}));
  CHECK(r.R == doctest::Approx(std::pow(8.0, 0.25)));
  CHECK(r.I_star == std::vector<std::size_t>{2});
  CHECK(max_subset_root(GridShape({1})).R == 1);
  for (Coord n : {2, 5, 40})
    CHECK(max_subset_root(GridShape({n, n, n})).I_star.size() == 3);

  const auto rep = bound_report(GridShape({81}));
  CHECK(rep.lower == doctest::Approx(std::pow(6.0, -0.5) / 2 * 3));
  CHECK(rep.almost_cube);
  CHECK(rep.lower <= rep.upper);
}

TEST_CASE("max_subset_root is permutation invariant and monotone") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    std::vector<Coord> n{1 + Coord(rng() % 50), 1 + Coord(rng() % 50), 1 + Coord(rng() % 50)};
    const double R = max_subset_root(GridShape(n)).R;
    auto p = n;
    std::swap(p[0], p[2]);
    CHECK(max_subset_root(GridShape(p)).R == doctest::Approx(R));
    auto bigger = n;
    bigger[rng() % 3] += 1 + Coord(rng() % 10);
    CHECK(max_subset_root(GridShape(bigger)).R >= R * (1 - 1e-12));
  }
}
