#include "apdisc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "apdisc/error.hpp"

namespace apdisc {

double entropy_g(double lambda) {
  if (!(lambda >= 0)) throw InputError("entropy weight needs lambda >= 0");
  if (lambda == 0) return std::numeric_limits<double>::infinity();
  if (lambda >= 2) return 10.0 * std::exp(-lambda * lambda / 4.0);
  return 10.0 * std::log1p(2.0 / lambda);
}

double ScheduleBranch::crossover() const { return std::pow(K, 1.0 / exponent); }

double ScheduleBranch::operator()(double s) const {
  const double x = crossover();
  const double r = s / x;
  return s >= x ? c * std::sqrt(s) / r : c * std::sqrt(s) * std::pow(r, -0.1);
}

DeltaSchedule DeltaSchedule::simple(int d, double K, double c) {
  if (d < 1) throw InputError("schedule dimension must be positive");
  if (!(K > 0) || !(c > 0)) throw InputError("schedule needs K > 0 and c > 0");
  DeltaSchedule s;
  s.kind_ = Kind::Simple;
  s.d_ = d;
  s.branches_ = {ScheduleBranch{K, c, static_cast<double>(d + 1)}};
  return s;
}

DeltaSchedule DeltaSchedule::simple(const GridShape& shape, double c) {
  const int d = static_cast<int>(shape.dim());
  auto s = simple(d, std::pow(5.0, d + 1) * static_cast<double>(shape.size()), c);
  s.nmin_ = static_cast<double>(shape.min_extent());
  s.nmax_ = static_cast<double>(shape.max_extent());
  return s;
}

DeltaSchedule DeltaSchedule::three_branch(const GridShape& shape, std::int64_t m, double delta,
                                          double c1, double c2, double c0) {
  if (m < 1 || m > shape.size()) throw InputError("need 1 <= m <= |grid|");
  if (!(delta > 0 && delta <= 1)) throw InputError("delta must lie in (0, 1]");
  const int d = static_cast<int>(shape.dim());
  const double dd = d;
  const double P = static_cast<double>(shape.size());
  const double n1 = static_cast<double>(shape.min_extent());
  const double rho = static_cast<double>(m) / P;
  double fact = 1;
  for (int i = 2; i <= d + 2; ++i) fact *= i;
  const double C = c0 * std::pow(2.0, dd * dd * dd) * std::pow(5.0, dd);
  const double K1 = 15 * std::pow(5.0, dd) * P / std::pow(n1, dd - 1);
  const double K2 = 15 * std::pow(5.0, dd) * P;
  const double K3 =
      15 * C * P * std::pow(rho, delta / (std::pow(4.0, dd + 1) * (dd + 1) * (dd + 1) * fact));
  DeltaSchedule s;
  s.kind_ = Kind::ThreeBranch;
  s.d_ = d;
  s.nmin_ = n1;
  s.nmax_ = static_cast<double>(shape.max_extent());
  s.branches_ = {ScheduleBranch{K1, c1, 2.0}, ScheduleBranch{K2, c2, dd + 1},
                 ScheduleBranch{K3, c2, dd + 1}};
  s.win_lo_ = std::pow(P, 1 / (dd + 1)) * std::pow(rho, delta / (std::pow(4.0, dd) * (dd + 1)));
  s.win_hi_ = n1 * std::pow(rho, delta / (4 * (dd + 1) * (dd + 1)));
  return s;
}

DeltaSchedule DeltaSchedule::for_shape(const GridShape& shape, std::int64_t m, double c1,
                                       double c2) {
  const double d = static_cast<double>(shape.dim());
  const double nmin = static_cast<double>(shape.min_extent());
  const bool cube = shape.min_extent() == shape.max_extent();
  if (!cube && nmin >= 2 && m >= 1) {
    double delta = std::min(1.0, d + 1 - std::log(static_cast<double>(shape.size())) / std::log(nmin));
    if (delta > 1e-9) return three_branch(shape, m, delta, c1, c2);
  }
  return simple(shape, c2);
}

double DeltaSchedule::operator()(double s) const {
  if (kind_ == Kind::Simple) return branches_[0](s);
  if (s > nmin_) return branches_[0](s);
  if (s >= win_lo_ && s <= win_hi_) return branches_[2](s);
  return branches_[1](s);
}

std::string DeltaSchedule::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::Simple) {
    os << "simple K=" << branches_[0].K << " c=" << branches_[0].c;
  } else {
    os << "three-branch K1=" << branches_[0].K << " K2=" << branches_[1].K
       << " K3=" << branches_[2].K << " c1=" << branches_[0].c << " c2=" << branches_[1].c
       << " window=[" << win_lo_ << "," << win_hi_ << "]";
  }
  return os.str();
}

double schedule_series(double K, int d, double c) {
  auto b = DeltaSchedule::simple(d, K, c);
  const double x = b.branch(0).crossover();
  double sum = 0;
  for (int i = 0; i < 2000; ++i) {
    const double s = std::ldexp(1.0, i);
    const double term =
        K / std::ldexp(1.0, i * (d + 1)) * entropy_g(b(s) / std::sqrt(s));
    sum += term;
    if (s >= x && term < 1e-15) break;
  }
  return sum;
}

FeasibilityReport schedule_feasibility(const DeltaSchedule& sched, const GridShape& shape,
                                       std::int64_t m) {
  if (m < 1) throw InputError("feasibility needs m >= 1");
  const double d = static_cast<double>(shape.dim());
  const double P = static_cast<double>(shape.size());
  const double n1 = static_cast<double>(shape.min_extent());
  const double nd = static_cast<double>(shape.max_extent());
  FeasibilityReport r;
  for (double s = 1; s <= nd; s *= 2) {
    // Counting bound per unit of m: small sizes share all axes, long sizes fit
    // only along the longer axes.
    const double fm = s <= n1 ? std::pow(5.0, d) * P / std::pow(s, d + 1)
                              : std::pow(5.0, d) * P / (s * s * std::pow(n1, d - 1));
    const double t = fm * entropy_g(sched(s) / std::sqrt(s));
    r.terms.push_back(t);
    r.sum += t;
  }
  r.ratio = r.sum / r.target;
  r.feasible = r.sum <= r.target;
  return r;
}

DyadicSumCheck dyadic_sum_check(double K, int d, double c, double u, double v) {
  if (!(u > 0) || !(u < v)) throw InputError("need 0 < u < v");
  auto b = DeltaSchedule::simple(d, K, c);
  DyadicSumCheck r;
  for (int t = 0; t < 200; ++t) {
    const double s = std::ldexp(1.0, t);
    if (s > v) break;
    if (s >= u) r.sum += b(s);
  }
  const double x = std::pow(K, 1.0 / (d + 1));
  r.bound = 5 * c * std::pow(K, 1.0 / (2 * d + 2)) *
            std::min(std::pow(v / x, 0.4), std::pow(u / x, -0.5));
  r.holds = r.sum <= r.bound * (1 + 1e-9);
  return r;
}

}  // namespace apdisc
