#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apdisc/grid.hpp"

namespace apdisc {

// Entropy weight: 10 exp(-l^2/4) for l >= 2, 10 log(1 + 2/l) for 0 < l < 2.
double entropy_g(double lambda);

// Size allowance b(s) = c sqrt(s) (s / K^(1/e))^(-1) above the crossover
// K^(1/e) and c sqrt(s) (s / K^(1/e))^(-0.1) below it; e = d+1 except for the
// long-axis branch of the three-branch form, which uses e = 2.
struct ScheduleBranch {
  double K = 1;
  double c = 1;
  double exponent = 2;  // e
  double crossover() const;
  double operator()(double s) const;
};

class DeltaSchedule {
 public:
  enum class Kind { Simple, ThreeBranch };

  // K = 5^(d+1) N_1...N_d.
  static DeltaSchedule simple(const GridShape& shape, double c);
  static DeltaSchedule simple(int d, double K, double c);
  // Branches b_1 (min N < s <= max N), b_3 (middle window), b_2 elsewhere.
  static DeltaSchedule three_branch(const GridShape& shape, std::int64_t m, double delta,
                                    double c1, double c2, double c0 = 1.0);
  // Three-branch form when the shape is an almost-cube but not a cube, else simple.
  static DeltaSchedule for_shape(const GridShape& shape, std::int64_t m, double c1, double c2);

  static double proof_c(int d) { return 10.0 * d + 2400.0; }
  static constexpr double kProofC1 = 2410.0;

  Kind kind() const { return kind_; }
  int dim() const { return d_; }
  double operator()(double s) const;
  const ScheduleBranch& branch(int i) const { return branches_[i]; }
  // b_3 window [lo, hi]; empty for the simple form.
  double window_lo() const { return win_lo_; }
  double window_hi() const { return win_hi_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Simple;
  int d_ = 1;
  double nmin_ = 0, nmax_ = 0;
  double win_lo_ = 0, win_hi_ = -1;
  std::vector<ScheduleBranch> branches_;  // simple: {b}; three-branch: {b1, b2, b3}
};

// sum_{i>=0} K / 2^(i(d+1)) g(b(2^i) / 2^(i/2)); terms dropped once past the
// crossover and below 1e-15.
double schedule_series(double K, int d, double c);

struct FeasibilityReport {
  double sum = 0;        // sum over dyadic s of fbound(s)/m * g(b(s)/sqrt s)
  double target = 0.2;   // m/5 normalized by m
  double ratio = 0;      // sum / target
  bool feasible = false;
  std::vector<double> terms;
};

FeasibilityReport schedule_feasibility(const DeltaSchedule& sched, const GridShape& shape,
                                       std::int64_t m);

struct DyadicSumCheck {
  double sum = 0;
  double bound = 0;
  bool holds = false;
};

// sum_{s = 2^t in [u, v]} b(s) against 5 c K^(1/(2d+2)) min((v K^(-1/(d+1)))^0.4,
// (u K^(-1/(d+1)))^(-0.5)).
DyadicSumCheck dyadic_sum_check(double K, int d, double c, double u, double v);

}  // namespace apdisc
