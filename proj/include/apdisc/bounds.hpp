#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apdisc/error.hpp"
#include "apdisc/grid.hpp"

namespace apdisc {

class ShapeConditionError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};

class WindowError : public HypothesisError {
 public:
  using HypothesisError::HypothesisError;
};

struct BoundParams {
  GridShape shape;
  std::int64_t m = 0;
  double delta = 1.0;
  double beta = 0.25;
  std::int64_t s = 1;

  double rho() const { return static_cast<double>(m) / static_cast<double>(shape.size()); }
  void validate() const;
};

// 5^d N_1...N_d m / s^(d+1), for 1 <= s <= min N_i.
double bound_f_simple(const BoundParams& p);
// m prod(4 N_i / s + 1), for s >= 2.
double bound_U_box(const BoundParams& p);

struct RefinedWindow {
  double lower = 0;
  double upper = 0;
  bool shape_condition = false;
  std::int64_t s_min = 0;  // integer s inside [lower, upper]; s_min > s_max when empty
  std::int64_t s_max = -1;
  bool empty() const { return s_min > s_max; }
};

RefinedWindow refined_window(const BoundParams& p);
// C0 2^(d^3) 5^d (m N_1...N_d / s^d) rho^(min(beta,delta) / (4^d (d+2)!)).
double bound_U_refined(const BoundParams& p, double c0 = 1.0);

// Sum over all b != 0 (both signs) of |U(X, b, s)|, s >= 2.
std::int64_t u_sum_two_signed(const GridShape& shape, const std::vector<char>& mask,
                              std::int64_t s);
std::int64_t u_sum_two_signed(std::span<const Point> X, std::int64_t s);

// 6^d eps n_1...n_d; requires eps n_i >= 1.
double bound_small_gcd_count(std::span<const std::int64_t> n, double eps);
// Nonzero b in prod[-n_i, n_i] with |b_i| / gcd(b) <= (num/den) n_i for every i.
std::int64_t count_small_gcd_points(std::span<const std::int64_t> n, std::int64_t num,
                                    std::int64_t den);
// count <= 6^d (num/den) n_1...n_d, compared in integers.
bool small_gcd_bound_holds(std::span<const std::int64_t> n, std::int64_t num, std::int64_t den);

struct CauchySchwarzResult {
  std::int64_t lhs = 0;       // sum_{i,j} |A_i ∩ A_j|
  std::int64_t total = 0;     // sum_i |A_i|
  std::int64_t m = 0;
  double rhs = 0;             // total^2 / m
  bool holds = false;         // m lhs >= total^2, exactly
  bool equality = false;
};

// Family members are subsets of {0, .., m-1}.
CauchySchwarzResult cauchy_schwarz_check(std::int64_t m,
                                         const std::vector<std::vector<std::int64_t>>& family);

// C sqrt(N) m^(3/2) / s, for s >= 5 sqrt(m).
double ms_base_bound(std::int64_t N, std::int64_t m, std::int64_t s, double C = 1.0);

struct SubsetRoot {
  double R = 1.0;
  std::vector<std::size_t> I_star;  // 0-based axes
};

// max over axis subsets I of (prod_{i in I} N_i)^(1/(2|I|+2)); empty I gives 1.
SubsetRoot max_subset_root(const GridShape& shape);

struct BoundReport {
  double lower = 0;
  double upper = 0;            // almost-cube form when it applies, else general form
  bool almost_cube = false;
  double delta = 0;            // largest delta in (0,1] with prod N <= (min N)^(d+1-delta)
  double R = 1;
  std::vector<std::size_t> I_star;
  double c_lower = 0;          // 6^(-d/2)/2
  double c_upper = 1;          // unknown absolute constant, configurable
  std::string upper_form;
};

BoundReport bound_report(const GridShape& shape, double c_upper = 1.0);

}  // namespace apdisc
