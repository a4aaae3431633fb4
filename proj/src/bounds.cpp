#include "apdisc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apdisc/canonical.hpp"

namespace apdisc {

namespace {

constexpr double kLogSlack = 1e-12;

double product(const GridShape& shape) { return static_cast<double>(shape.size()); }

std::int64_t ipow(std::int64_t base, std::size_t e) {
  std::int64_t r = 1;
  while (e--) r *= base;
  return r;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

void BoundParams::validate() const {
  if (shape.dim() == 0) throw InputError("bound parameters need a grid shape");
  if (m < 0 || m > shape.size()) throw InputError("m must lie in [0, |grid|]");
  if (!(delta > 0 && delta <= 1)) throw InputError("delta must lie in (0, 1]");
  if (!(beta > 0 && beta < 0.5)) throw InputError("beta must lie in (0, 1/2)");
}

double bound_f_simple(const BoundParams& p) {
  p.validate();
  if (p.s < 1 || p.s > p.shape.min_extent())
    throw HypothesisError("s must satisfy 1 <= s <= min N_i");
  const double d = static_cast<double>(p.shape.dim());
  return std::pow(5.0, d) * product(p.shape) * static_cast<double>(p.m) /
         std::pow(static_cast<double>(p.s), d + 1);
}

double bound_U_box(const BoundParams& p) {
  p.validate();
  if (p.s < 2) throw HypothesisError("s must be at least 2");
  double r = static_cast<double>(p.m);
  for (Coord n : p.shape.dims()) r *= 4.0 * static_cast<double>(n) / static_cast<double>(p.s) + 1.0;
  return r;
}

RefinedWindow refined_window(const BoundParams& p) {
  p.validate();
  const double d = static_cast<double>(p.shape.dim());
  const double P = product(p.shape);
  const double nmin = static_cast<double>(p.shape.min_extent());
  const double rho = p.rho();
  RefinedWindow w;
  w.shape_condition = std::log(P) <= (d + 1 - p.delta) * std::log(nmin) + kLogSlack;
  w.lower = std::pow(P, 1.0 / (d + 1)) * std::pow(rho, p.delta / (std::pow(4.0, d) * (d + 1)));
  w.upper = nmin * std::pow(rho, p.beta);
  if (rho > 0) {
    w.s_min = static_cast<std::int64_t>(std::ceil(w.lower * (1 - kLogSlack)));
    w.s_max = static_cast<std::int64_t>(std::floor(w.upper * (1 + kLogSlack)));
  }
  return w;
}

double bound_U_refined(const BoundParams& p, double c0) {
  auto w = refined_window(p);
  if (!w.shape_condition)
    throw ShapeConditionError("grid violates prod N_i <= (min N_i)^(d+1-delta)");
  if (w.empty()) throw WindowError("admissible window for s is empty");
  if (p.s < w.s_min || p.s > w.s_max) throw WindowError("s lies outside the admissible window");
  const int d = static_cast<int>(p.shape.dim());
  const double expo = std::min(p.beta, p.delta) / (std::pow(4.0, d) * factorial(d + 2));
  return c0 * std::pow(2.0, d * d * d) * std::pow(5.0, d) * static_cast<double>(p.m) *
         product(p.shape) / std::pow(static_cast<double>(p.s), d) * std::pow(p.rho(), expo);
}

std::int64_t u_sum_two_signed(const GridShape& shape, const std::vector<char>& mask,
                              std::int64_t s) {
  if (s < 2) throw HypothesisError("two-signed U sum is infinite for s < 2");
  std::int64_t total = 0;
  for (const auto& b : enumerate_directions(shape, s)) total += 2 * u_size(shape, mask, b, s);
  return total;
}

std::int64_t u_sum_two_signed(std::span<const Point> X, std::int64_t s) {
  if (X.empty()) return 0;
  auto e = embed(X);
  return u_sum_two_signed(e.box, e.mask, s);
}

double bound_small_gcd_count(std::span<const std::int64_t> n, double eps) {
  if (n.empty()) throw InputError("box needs at least one axis");
  if (!(eps > 0 && eps <= 1)) throw InputError("eps must lie in (0, 1]");
  double r = std::pow(6.0, static_cast<double>(n.size())) * eps;
  for (auto v : n) {
    if (eps * static_cast<double>(v) < 1 - kLogSlack) throw HypothesisError("need 1/eps <= n_i");
    r *= static_cast<double>(v);
  }
  return r;
}

std::int64_t count_small_gcd_points(std::span<const std::int64_t> n, std::int64_t num,
                                    std::int64_t den) {
  if (n.empty()) throw InputError("box needs at least one axis");
  if (num <= 0 || den <= 0) throw InputError("eps must be a positive fraction");
  const std::size_t d = n.size();
  std::vector<std::int64_t> b(d);
  for (std::size_t i = 0; i < d; ++i) b[i] = -n[i];
  std::int64_t count = 0;
  while (true) {
    std::int64_t g = 0;
    for (auto v : b) g = std::gcd(g, v);
    if (g != 0) {
      bool ok = true;
      // |b_i| / g <= (num/den) n_i  <=>  |b_i| den <= num n_i g
      for (std::size_t i = 0; i < d && ok; ++i) ok = std::abs(b[i]) * den <= num * n[i] * g;
      count += ok ? 1 : 0;
    }
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (b[i] < n[i]) {
        ++b[i];
        break;
      }
      b[i] = -n[i];
      if (i == 0) return count;
    }
  }
}

bool small_gcd_bound_holds(std::span<const std::int64_t> n, std::int64_t num, std::int64_t den) {
  const std::int64_t count = count_small_gcd_points(n, num, den);
  std::int64_t rhs = ipow(6, n.size()) * num;
  for (auto v : n) rhs *= v;
  return count * den <= rhs;
}

CauchySchwarzResult cauchy_schwarz_check(std::int64_t m,
                                         const std::vector<std::vector<std::int64_t>>& family) {
  if (m <= 0) throw InputError("ground set must be nonempty");
  std::vector<std::int64_t> mult(static_cast<std::size_t>(m), 0);
  CauchySchwarzResult r;
  r.m = m;
  for (const auto& A : family) {
    std::vector<std::int64_t> a(A);
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw InputError("family members must be sets");
    for (auto x : a) {
      if (x < 0 || x >= m) throw InputError("family member outside the ground set");
      ++mult[x];
    }
    r.total += static_cast<std::int64_t>(a.size());
  }
  // sum_{i,j} |A_i ∩ A_j| = sum_x mult(x)^2
  for (auto c : mult) r.lhs += c * c;
  r.rhs = static_cast<double>(r.total) * static_cast<double>(r.total) / static_cast<double>(m);
  r.holds = m * r.lhs >= r.total * r.total;
  r.equality = m * r.lhs == r.total * r.total;
  return r;
}

double ms_base_bound(std::int64_t N, std::int64_t m, std::int64_t s, double C) {
  if (N < 1 || m < 0 || m > N) throw InputError("need 0 <= m <= N");
  if (s * s < 25 * m) throw HypothesisError("need s >= 5 sqrt(m)");
  return C * std::sqrt(static_cast<double>(N)) * std::pow(static_cast<double>(m), 1.5) /
         static_cast<double>(s);
}

SubsetRoot max_subset_root(const GridShape& shape) {
  const std::size_t d = shape.dim();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shape.extent(a) > shape.extent(b); });
  // For fixed |I| = k the product is largest on the k longest axes.
  SubsetRoot best;
  double log_prod = 0;
  std::size_t best_k = 0;
  double best_log = 0;
  for (std::size_t k = 1; k <= d; ++k) {
    log_prod += std::log(static_cast<double>(shape.extent(order[k - 1])));
    double v = log_prod / static_cast<double>(2 * k + 2);
    if (v > best_log + kLogSlack) best_log = v, best_k = k;
  }
  best.R = std::exp(best_log);
  best.I_star.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_k));
  std::sort(best.I_star.begin(), best.I_star.end());
  return best;
}

BoundReport bound_report(const GridShape& shape, double c_upper) {
  BoundReport r;
  const double d = static_cast<double>(shape.dim());
  const double P = product(shape);
  auto root = max_subset_root(shape);
  r.R = root.R;
  r.I_star = root.I_star;
  r.c_lower = std::pow(6.0, -d / 2) / 2;
  r.c_upper = c_upper;
  r.lower = r.c_lower * r.R;
  const double nmin = static_cast<double>(shape.min_extent());
  if (nmin >= 2) r.delta = std::min(1.0, d + 1 - std::log(P) / std::log(nmin));
  r.almost_cube = r.delta > kLogSlack;
  if (r.almost_cube) {
    r.upper = c_upper / r.delta * std::pow(P, 1.0 / (2 * d + 2));
    r.upper_form = "almost-cube";
  } else if (P >= 3) {
    r.upper = c_upper * std::log(P) / std::log(std::log(P)) * r.R;
    r.upper_form = "general";
  } else {
    r.upper = 1.0;
    r.upper_form = "trivial";
  }
  return r;
}

}  // namespace apdisc
