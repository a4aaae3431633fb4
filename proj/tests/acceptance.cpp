// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance [N ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "apdisc/bounds.hpp"
#include "apdisc/canonical.hpp"
#include "apdisc/certify.hpp"
#include "apdisc/cli.hpp"
#include "apdisc/lattice.hpp"
#include "apdisc/schedule.hpp"
#include "apdisc/solver.hpp"
#include "oracles.hpp"

using namespace apdisc;
using oracle::Vec;

namespace {

// Tolerances and windows.
constexpr double kSeriesRelTol = 1e-9;
constexpr double kSeriesTermFloor = 1e-15;
constexpr double kSlope1Lo = 0.17, kSlope1Hi = 0.33;
constexpr double kSlope2Lo = 0.23, kSlope2Hi = 0.43;
constexpr int kScalingSeeds = 5;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<std::vector<Coord>> with_permutations(const std::vector<std::vector<Coord>>& shapes) {
  std::vector<std::vector<Coord>> out;
  for (auto s : shapes) {
    std::sort(s.begin(), s.end());
    do out.push_back(s);
    while (std::next_permutation(s.begin(), s.end()));
  }
  return out;
}

std::int64_t trace_sum(const PartialColoring& chi, const std::vector<Vec>& pts) {
  std::int64_t s = 0;
  for (const auto& p : pts) s += chi.values()[oracle::flat(chi.shape(), p)];
  return s;
}

// 1. disc_eval against exhaustive AP enumeration.
Outcome criterion1() {
  std::mt19937_64 rng(101);
  auto shapes = with_permutations(oracle::small_shapes(1, 24));
  shapes.push_back({1});
  shapes.push_back({1, 5});
  shapes.push_back({3, 1, 2});
  std::int64_t checked = 0, bad = 0;
  for (const auto& dims : shapes) {
    const GridShape shape(dims);
    for (int t = 0; t < 200; ++t) {
      const auto chi = oracle::random_coloring(shape, rng, t % 4 == 3 ? 0.3 : 0.0);
      const auto got = disc_eval(chi, t % 2 ? 3 : 1);
      const bool ok = got.value == oracle::brute_disc(chi) &&
                      std::abs(chi_sum(chi, got.witness)) == got.value;
      bad += !ok;
      ++checked;
    }
  }
  // Every coloring of [4], including partial ones.
  const GridShape four({4});
  for (int code = 0; code < 81; ++code) {
    PartialColoring chi(four);
    int c = code;
    for (int i = 0; i < 4; ++i, c /= 3) chi.set(i, c % 3 - 1);
    bad += disc_eval(chi).value != oracle::brute_disc(chi);
    ++checked;
  }
  return {bad == 0, fmt("%lld colorings over %zu shapes, %lld mismatches", (long long)checked,
                        shapes.size(), (long long)bad)};
}

// 2. Canonical decomposition and the block-maximum bound.
Outcome criterion2() {
  std::mt19937_64 rng(202);
  std::int64_t bad_sets = 0, bad_bound = 0, bad_blocks = 0;
  for (int t = 0; t < 500; ++t) {
    const GridShape shape(t % 2 ? std::vector<Coord>{6, 6, 6} : std::vector<Coord>{8, 8});
    std::uniform_real_distribution<double> u(0, 1);
    const auto X = oracle::random_subset(shape, rng, 0.2 + 0.8 * u(rng));
    const std::set<Vec> inX(X.begin(), X.end());
    const std::size_t d = shape.dim();
    // Random contained AP.
    Vec a(d), b(d);
    do {
      for (std::size_t i = 0; i < d; ++i) {
        a[i] = 1 + static_cast<std::int64_t>(rng() % shape.extent(i));
        const auto r = shape.extent(i) - 1;
        b[i] = static_cast<std::int64_t>(rng() % (2 * r + 1)) - r;
      }
    } while (oracle::is_zero(b));
    Coord lmax = 0;
    for (Vec x = a; oracle::inside(shape, x); ++lmax)
      for (std::size_t i = 0; i < d; ++i) x[i] += b[i];
    const Coord len = 1 + static_cast<Coord>(rng() % lmax);
    std::vector<Vec> trace;
    for (Coord k = 0; k < len; ++k) {
      Vec x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = a[i] + k * b[i];
      if (inX.count(x)) trace.push_back(x);
    }
    if (X.empty()) continue;
    const auto pts = oracle::as_points(X);
    const auto dec = decompose(pts, APSpec{a, b, len});

    std::multiset<Vec> plus, minus;
    std::set<Coord> plus_sizes, minus_sizes;
    for (const auto& blk : dec.plus) {
      for (const auto& p : block_points(dec.line, blk)) plus.insert(p);
      bad_blocks += !plus_sizes.insert(blk.size).second || (blk.size & (blk.size - 1)) != 0;
    }
    for (const auto& blk : dec.minus) {
      for (const auto& p : block_points(dec.line, blk)) minus.insert(p);
      bad_blocks += !minus_sizes.insert(blk.size).second || (blk.size & (blk.size - 1)) != 0;
    }
    // Disjoint within each list, minus inside plus, difference equals the trace.
    const std::set<Vec> plus_set(plus.begin(), plus.end()), minus_set(minus.begin(), minus.end());
    bool ok = plus_set.size() == plus.size() && minus_set.size() == minus.size();
    for (const auto& p : minus_set) ok = ok && plus_set.count(p);
    std::set<Vec> diff;
    for (const auto& p : plus_set)
      if (!minus_set.count(p)) diff.insert(p);
    ok = ok && diff == std::set<Vec>(trace.begin(), trace.end());
    // The line is an independently built class, in the same order.
    if (!dec.plus.empty()) {
      const Vec dir(dec.line.direction.begin(), dec.line.direction.end());
      const Vec head(dec.line.points.front().begin(), dec.line.points.front().end());
      bool found = false;
      for (const auto& c : oracle::classes(shape, X, dir))
        if (std::find(c.begin(), c.end(), head) != c.end()) {
          found = true;
          ok = ok && c == std::vector<Vec>(dec.line.points.begin(), dec.line.points.end());
        }
      ok = ok && found;
    }
    bad_sets += !ok;

    // |chi(A)| <= 2 sum_s max_{|S| = s} |chi(S)| over every canonical block of X.
    const auto chi = oracle::random_coloring(shape, rng);
    std::map<std::int64_t, std::int64_t> block_max;
    if (!X.empty()) block_max[1] = 1;
    for (const auto& dir : oracle::box_vectors(oracle::radius(shape))) {
      if (!oracle::positive_first(dir)) continue;
      for (const auto& c : oracle::classes(shape, X, dir))
        for (std::size_t s = 2; s <= c.size(); s *= 2)
          for (std::size_t j = 0; (j + 1) * s <= c.size(); ++j) {
            std::int64_t sum = 0;
            for (std::size_t k = j * s; k < (j + 1) * s; ++k)
              sum += chi.values()[oracle::flat(shape, c[k])];
            auto& m = block_max[static_cast<std::int64_t>(s)];
            m = std::max(m, std::abs(sum));
          }
    }
    std::int64_t rhs = 0;
    for (const auto& [s, m] : block_max) rhs += 2 * m;
    bad_bound += std::abs(trace_sum(chi, trace)) > rhs;
  }
  return {bad_sets == 0 && bad_bound == 0 && bad_blocks == 0,
          fmt("500 instances: %lld set mismatches, %lld block-size faults, %lld bound violations",
              (long long)bad_sets, (long long)bad_blocks, (long long)bad_bound)};
}

struct CountingTally {
  std::int64_t checks = 0, lib_mismatch = 0, long_class = 0, power = 0, box = 0;
};

// Exact integer forms: s f <= sum|U|; s^(d+1) f <= 5^d P m; s^d sum|U| <= m prod(4 N_i + s).
void counting_checks(const GridShape& shape, std::int64_t m, std::int64_t s, std::int64_t f,
                     std::int64_t u, CountingTally& t) {
  const std::size_t d = shape.dim();
  std::int64_t sd = 1, five = 1, box = m;
  for (std::size_t i = 0; i < d; ++i) sd *= s, five *= 5, box *= 4 * shape.extent(i) + s;
  ++t.checks;
  t.long_class += s * f > u;
  if (s <= shape.min_extent()) t.power += sd * s * f > five * shape.size() * m;
  t.box += sd * u > box;
}

// 3. Counting bounds with their stated constants.
Outcome criterion3() {
  std::mt19937_64 rng(303);
  CountingTally t;
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 1000; ++k) {
    const GridShape shape(k % 2 ? std::vector<Coord>{6, 6, 6} : std::vector<Coord>{8, 8});
    const auto X = oracle::random_subset(shape, rng, u(rng));
    const auto mask = oracle::as_mask(shape, X);
    const auto m = static_cast<std::int64_t>(X.size());
    for (std::int64_t s = 2; s <= shape.min_extent(); s *= 2) {
      const auto f = oracle::f_count(shape, X, s);
      const auto us = oracle::u_sum(shape, X, s);
      t.lib_mismatch += f != apdisc::f_count(shape, mask, s) ||
                        us != apdisc::u_sum_two_signed(shape, mask, s);
      counting_checks(shape, m, s, f, us, t);
    }
  }
  // Every X in [4]^2.
  const GridShape sq({4, 4});
  const auto all = oracle::all_points(sq);
  for (int bits = 0; bits < (1 << 16); ++bits) {
    std::vector<Vec> X;
    for (int i = 0; i < 16; ++i)
      if (bits >> i & 1) X.push_back(all[i]);
    std::vector<char> mask(16);
    for (int i = 0; i < 16; ++i) mask[i] = static_cast<char>(bits >> i & 1);
    for (std::int64_t s : {2, 4}) {
      const auto f = apdisc::f_count(sq, mask, s);
      const auto us = u_sum_two_signed(sq, mask, s);
      if (bits % 257 == 0)
        t.lib_mismatch += f != oracle::f_count(sq, X, s) || us != oracle::u_sum(sq, X, s);
      counting_checks(sq, static_cast<std::int64_t>(X.size()), s, f, us, t);
    }
  }
  return {t.lib_mismatch == 0 && t.long_class == 0 && t.power == 0 && t.box == 0,
          fmt("%lld (X, s) checks: %lld count mismatches vs oracle, violations: long-class "
              "%lld, power %lld, box %lld",
              (long long)t.checks, (long long)t.lib_mismatch, (long long)t.long_class,
              (long long)t.power, (long long)t.box)};
}

struct LatticeTally {
  std::int64_t maps = 0, kernel = 0, range = 0, fibers = 0, volume = 0, lll = 0, target = 0;
  std::int64_t fiber_checks = 0, fiber_bad = 0, fiber_lib = 0;
};

void lattice_suite(LatticeTally& t) {
  for (int d : {2, 3}) {
    std::vector<Coord> N(static_cast<std::size_t>(d), 1);
    for (;;) {
      const GridShape shape(N);
      const auto pts = oracle::all_points(shape);
      Vec r(N.begin(), N.end());
      for (const auto& b : oracle::box_vectors(r)) {
        if (oracle::is_zero(b)) continue;
        const auto pm = projection_map(b, shape);
        ++t.maps;
        const auto g = oracle::gcd_all(b);
        Vec p(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) p[i] = b[i] / g;
        // M b = 0 and rank d - 1.
        bool ok = pm.M.size() == static_cast<std::size_t>(d - 1);
        for (const auto& row : pm.M) {
          std::int64_t s = 0;
          for (int i = 0; i < d; ++i) s += row[i] * p[i];
          ok = ok && s == 0;
        }
        if (ok && d == 2) ok = pm.M[0][0] != 0 || pm.M[0][1] != 0;
        if (ok && d == 3) {
          const auto& u = pm.M[0];
          const auto& w = pm.M[1];
          ok = u[1] * w[2] - u[2] * w[1] != 0 || u[2] * w[0] - u[0] * w[2] != 0 ||
               u[0] * w[1] - u[1] * w[0] != 0;
        }
        t.kernel += !ok;
        // Image inside the target box; N*_j = 3|r*_j|_1, v_j = 2|r*_j|_1.
        std::map<Vec, std::vector<Vec>> fiber;
        bool in_range = true;
        for (std::size_t j = 0; j < pm.M.size(); ++j) {
          std::int64_t l1 = 0;
          for (int i = 0; i < d; ++i) l1 += std::abs(pm.M[j][i]) * N[i];
          in_range = in_range && pm.target[j] == 3 * l1 && pm.v[j] == 2 * l1;
        }
        for (const auto& x : pts) {
          Vec y(pm.M.size());
          for (std::size_t j = 0; j < pm.M.size(); ++j) {
            y[j] = pm.v[j];
            for (int i = 0; i < d; ++i) y[j] += pm.M[j][i] * x[i];
            in_range = in_range && y[j] >= 1 && y[j] <= pm.target[j];
          }
          fiber[y].push_back(x);
        }
        t.range += !in_range;
        // Same image iff the difference is a multiple of b/gcd: fibers are exactly
        // the maximal lines along b/gcd.
        const auto lines = oracle::classes(shape, pts, p);
        bool fib_ok = fiber.size() == lines.size();
        for (const auto& [img, xs] : fiber)
          for (const auto& x : xs) {
            Vec diff(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - xs[0][i];
            fib_ok = fib_ok && oracle::integer_multiple(diff, p);
          }
        t.fibers += !fib_ok;
        // Volume ratio in [1/2, 2^(d^2)], lambda = max |p_i| / N_i.
        Rational lambda = 0, prodN = 1, prodT = 1;
        for (int i = 0; i < d; ++i) {
          lambda = std::max(lambda, Rational(std::abs(p[i]), N[i]));
          prodN *= N[i];
        }
        for (auto v : pm.target) prodT *= v;
        const Rational ratio = prodT / (lambda * prodN);
        t.volume += ratio < Rational(1, 2) || ratio > Rational(BigInt(1) << (d * d));
        for (auto v : pm.target) t.target += v < shape.min_extent();
        // prod |r*_j|^2 <= 2^((d-1)(d-2)/2) |b*|^2 (prod N)^2.
        Rational lhs = 1, bstar = 0;
        for (const auto& row : pm.M) {
          Rational n2 = 0;
          for (int i = 0; i < d; ++i) n2 += Rational(row[i] * N[i]) * Rational(row[i] * N[i]);
          lhs *= n2;
        }
        for (int i = 0; i < d; ++i) bstar += Rational(p[i] * p[i], N[i] * N[i]);
        t.lll += lhs > Rational(BigInt(1) << ((d - 1) * (d - 2) / 2)) * bstar * prodN * prodN;
        // Preimage counts of the long classes mod b lie in [s, 2 / lambda].
        const auto cls = oracle::classes(shape, pts, b);
        for (Coord s = 1; s <= shape.min_extent(); ++s) {
          std::map<Vec, std::int64_t> count;
          std::vector<Point> U;
          for (const auto& c : cls)
            if (static_cast<Coord>(c.size()) >= s)
              for (const auto& x : c) {
                Vec y(pm.M.size());
                for (std::size_t j = 0; j < pm.M.size(); ++j) {
                  y[j] = pm.v[j];
                  for (int i = 0; i < d; ++i) y[j] += pm.M[j][i] * x[i];
                }
                ++count[y];
              }
          std::int64_t lo = -1, hi = 0;
          for (const auto& [y, c] : count) {
            ++t.fiber_checks;
            t.fiber_bad += c < s || Rational(c) * lambda > 2;
            lo = lo < 0 ? c : std::min(lo, c);
            hi = std::max(hi, c);
          }
          const auto fs = fiber_counts(pm, oracle::as_points(pts), s);
          t.fiber_lib += fs.images != static_cast<std::int64_t>(count.size()) ||
                         (!count.empty() && (fs.min_count != lo || fs.max_count != hi)) ||
                         fs.ok != (count.empty() || (lo >= s && Rational(hi) * lambda <= 2));
        }
      }
      std::size_t i = 0;
      while (i < N.size() && N[i] == 6) N[i] = 1, ++i;
      if (i == N.size()) break;
      ++N[i];
    }
  }
}

LatticeTally& lattice_tally() {
  static LatticeTally t;
  static bool done = false;
  if (!done) lattice_suite(t), done = true;
  return t;
}

// 4. Projection maps: kernel, range, fibers, volume ratio, reduced product.
Outcome criterion4() {
  const auto& t = lattice_tally();
  const bool ok = t.kernel + t.range + t.fibers + t.volume + t.lll + t.target == 0;
  return {ok, fmt("%lld maps (d=2,3; N_i<=6; every b): failures kernel %lld, range %lld, "
                  "fibers %lld, volume %lld, target %lld, product %lld",
                  (long long)t.maps, (long long)t.kernel, (long long)t.range, (long long)t.fibers,
                  (long long)t.volume, (long long)t.target, (long long)t.lll)};
}

// 5. Preimage counts.
Outcome criterion5() {
  const auto& t = lattice_tally();
  return {t.fiber_bad == 0 && t.fiber_lib == 0,
          fmt("%lld fibers: %lld outside [s, 2/lambda], %lld library/oracle disagreements",
              (long long)t.fiber_checks, (long long)t.fiber_bad, (long long)t.fiber_lib)};
}

// 6. Directions with small normalized length.
Outcome criterion6() {
  std::string detail;
  bool pass = true;
  for (int d = 1; d <= 3; ++d) {
    std::int64_t cases = 0, viol = 0, mism = 0;
    std::int64_t worst_count = 0;
    Vec worst_n;
    std::int64_t worst_den = 0;
    Vec n(static_cast<std::size_t>(d), 1);
    for (;;) {
      const auto nmin = *std::min_element(n.begin(), n.end());
      for (std::int64_t den : {std::int64_t{2}, std::int64_t{4}, nmin}) {
        if (den < 2 || den > nmin) continue;  // eps < 1 and 1/eps <= n_i
        const auto count = oracle::small_gcd_count(n, 1, den);
        mism += count != count_small_gcd_points(n, 1, den);
        std::int64_t rhs = 1;
        for (int i = 0; i < d; ++i) rhs *= 6 * n[i];
        ++cases;
        if (count * den > rhs) {
          ++viol;
          if (worst_n.empty()) worst_n = n, worst_den = den, worst_count = count;
        }
      }
      // Nondecreasing n with n_i <= 12; the count is symmetric in the axes.
      int i = d - 1;
      while (i >= 0 && n[i] == 12) --i;
      if (i < 0) break;
      ++n[i];
      for (int j = i + 1; j < d; ++j) n[j] = n[i];
    }
    const bool ok = viol == 0 && mism == 0;
    pass = pass && ok;
    detail += fmt("d=%d: %lld/%lld violate, %lld mismatches", d, (long long)viol,
                  (long long)cases, (long long)mism);
    if (viol) {
      std::int64_t bound6 = 1;
      for (auto v : worst_n) bound6 *= 6 * v;
      detail += fmt(" (first: n=%lld eps=1/%lld count %lld > %.2f; the statement assumes d >= 2)",
                    (long long)worst_n[0], (long long)worst_den, (long long)worst_count,
                    static_cast<double>(bound6) / static_cast<double>(worst_den));
    }
    detail += d < 3 ? "; " : "";
  }
  return {pass, detail};
}

// 7. Pair-intersection inequality.
Outcome criterion7() {
  std::mt19937_64 rng(707);
  std::int64_t bad = 0, lib = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::int64_t m = 20;
    std::vector<std::vector<std::int64_t>> fam(1 + rng() % 10);
    const double dens = std::uniform_real_distribution<double>(0, 1)(rng);
    for (auto& A : fam)
      for (std::int64_t x = 0; x < m; ++x)
        if (std::uniform_real_distribution<double>(0, 1)(rng) < dens) A.push_back(x);
    std::int64_t lhs = 0, total = 0;
    for (const auto& A : fam) {
      total += static_cast<std::int64_t>(A.size());
      for (const auto& B : fam) {
        std::vector<std::int64_t> c;
        std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(c));
        lhs += static_cast<std::int64_t>(c.size());
      }
    }
    const auto r = cauchy_schwarz_check(m, fam);
    bad += m * lhs < total * total;
    lib += r.lhs != lhs || r.total != total || !r.holds;
  }
  std::int64_t eq_bad = 0;
  for (std::int64_t k = 1; k <= 6; ++k) {
    std::vector<std::int64_t> X(20);
    std::iota(X.begin(), X.end(), 0);
    const auto r = cauchy_schwarz_check(20, std::vector<std::vector<std::int64_t>>(k, X));
    eq_bad += !r.equality || r.lhs != k * k * 20;
  }
  return {bad == 0 && lib == 0 && eq_bad == 0,
          fmt("1000 families: %lld violations, %lld library mismatches; k-copies equality "
              "failures %lld",
              (long long)bad, (long long)lib, (long long)eq_bad)};
}

// 8. Energy inequality and the exact floor.
Outcome criterion8() {
  std::int64_t checked = 0, fail = 0, oracle_bad = 0;
  auto run = [&](const PartialColoring& chi, const LowerBoundCert& cert, bool with_oracle) {
    const auto e = energy_inequality_check(chi, cert);
    ++checked;
    fail += !e.pass || static_cast<double>(e.lhs) < e.rhs;
    if (with_oracle) oracle_bad += e.lhs != oracle::energy(chi, cert.L, Vec(cert.D.begin(), cert.D.end()));
  };
  const GridShape g44({4, 4});
  const auto c44 = lower_bound_value(g44);
  const auto m44 = manual_cert(g44, 2, {1, 1});
  for (int bits = 0; bits < (1 << 16); ++bits) {
    PartialColoring chi(g44);
    for (int i = 0; i < 16; ++i) chi.set(i, bits >> i & 1 ? 1 : -1);
    run(chi, c44, bits % 97 == 0);
    run(chi, m44, bits % 101 == 0);
  }
  std::mt19937_64 rng(808);
  for (const auto& dims : {std::vector<Coord>{6, 6}, std::vector<Coord>{4, 4, 4}}) {
    const GridShape shape(dims);
    const auto auto_cert = lower_bound_value(shape);
    const auto wide = dims.size() == 2 ? manual_cert(shape, 4, {2, 2}) : manual_cert(shape, 4, {1, 1, 1});
    for (int t = 0; t < 10000; ++t) {
      const auto chi = oracle::random_coloring(shape, rng);
      run(chi, auto_cert, t % 500 == 0);
      run(chi, wide, t % 500 == 1);
    }
  }
  std::int64_t shapes = 0, floor_bad = 0, chain_bad = 0, exact_bad = 0;
  for (const auto& dims : with_permutations(oracle::small_shapes(3, 20))) {
    const GridShape shape(dims);
    const auto rep = certified_floor_check(shape, 24);
    ++shapes;
    floor_bad += static_cast<double>(rep.exact) < rep.cert.value;
    chain_bad += rep.chain_applicable && !(rep.chain_ok && rep.energy_ok);
    if (shape.size() <= 12) {
      // Exhaustive minimum over every coloring, first cell fixed by symmetry.
      std::int64_t best = 1 << 30;
      for (std::int64_t bits = 0; bits < (std::int64_t{1} << (shape.size() - 1)); ++bits) {
        PartialColoring chi(shape);
        chi.set(0, 1);
        for (std::int64_t i = 1; i < shape.size(); ++i) chi.set(i, bits >> (i - 1) & 1 ? 1 : -1);
        best = std::min(best, oracle::brute_disc(chi));
      }
      exact_bad += best != rep.exact;
    }
  }
  return {fail == 0 && oracle_bad == 0 && floor_bad == 0 && chain_bad == 0 && exact_bad == 0,
          fmt("%lld energy checks: %lld failures, %lld oracle mismatches; %lld shapes with "
              "3<=P<=20: floor %lld, chain %lld, exact-vs-exhaustive %lld failures",
              (long long)checked, (long long)fail, (long long)oracle_bad, (long long)shapes,
              (long long)floor_bad, (long long)chain_bad, (long long)exact_bad)};
}

double ref_g(double l) { return l >= 2 ? 10 * std::exp(-l * l / 4) : 10 * std::log(1 + 2 / l); }

double ref_b(double s, double K, int d, double c) {
  const double x = std::pow(K, 1.0 / (d + 1));
  return s >= x ? c * std::sqrt(s) * x / s : c * std::sqrt(s) * std::pow(s / x, -0.1);
}

// 9. Schedule series and dyadic sums.
Outcome criterion9() {
  std::int64_t series = 0, over = 0, drift = 0;
  double worst = 0;
  for (int d = 1; d <= 3; ++d) {
    const double c = 10.0 * d + 2400;
    for (int e = 0; e <= 40; ++e) {
      const double K = std::pow(10.0, e / 4.0);
      double ref = 0;
      const double x = std::pow(K, 1.0 / (d + 1));
      for (int i = 0; i < 4000; ++i) {
        const double s = std::ldexp(1.0, i);
        const double term = K / std::ldexp(1.0, i * (d + 1)) * ref_g(ref_b(s, K, d, c) / std::sqrt(s));
        ref += term;
        if (s >= x && term < kSeriesTermFloor) break;
      }
      const double got = schedule_series(K, d, c);
      ++series;
      over += got > 1 || ref > 1;
      drift += std::abs(got - ref) > kSeriesRelTol * std::max(ref, 1e-300);
      worst = std::max(worst, got);
    }
  }
  // Agreement where the series is far from zero.
  std::int64_t agree = 0;
  for (int d = 1; d <= 3; ++d)
    for (double c : {0.5, 1.0, 2.0, 4.0})
      for (int e = 0; e <= 40; ++e) {
        const double K = std::pow(10.0, e / 4.0);
        const double x = std::pow(K, 1.0 / (d + 1));
        double ref = 0;
        for (int i = 0; i < 4000; ++i) {
          const double s = std::ldexp(1.0, i);
          const double term = K / std::ldexp(1.0, i * (d + 1)) * ref_g(ref_b(s, K, d, c) / std::sqrt(s));
          ref += term;
          if (s >= x && term < kSeriesTermFloor) break;
        }
        ++agree;
        drift += std::abs(schedule_series(K, d, c) - ref) > kSeriesRelTol * ref;
      }
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> lu(0, 8);
  std::int64_t sums = 0, sum_bad = 0, sum_lib = 0;
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const double c = 10.0 * d + 2400;
    const double K = std::pow(10.0, lu(rng) + 1);
    double u = std::pow(10.0, lu(rng) / 2), v = std::pow(10.0, lu(rng) / 2);
    if (u > v) std::swap(u, v);
    if (u == v) v = 2 * u;
    double sum = 0;
    for (int i = 0; i < 200; ++i) {
      const double s = std::ldexp(1.0, i);
      if (s > v) break;
      if (s >= u) sum += ref_b(s, K, d, c);
    }
    const double x = std::pow(K, 1.0 / (d + 1));
    const double bound =
        5 * c * std::pow(K, 1.0 / (2 * d + 2)) * std::min(std::pow(v / x, 0.4), std::pow(u / x, -0.5));
    const auto lib = dyadic_sum_check(K, d, c, u, v);
    ++sums;
    sum_bad += sum > bound * (1 + kSeriesRelTol);
    sum_lib += std::abs(lib.sum - sum) > kSeriesRelTol * std::max(sum, 1.0) || !lib.holds;
  }
  return {over == 0 && drift == 0 && sum_bad == 0 && sum_lib == 0,
          fmt("%lld series at c=10d+2400 (max %.3g): %lld above 1; %lld off reference (with %lld "
              "small-c series); %lld dyadic sums: %lld violations, %lld library mismatches",
              (long long)series, worst, (long long)over, (long long)drift, (long long)agree, (long long)sums,
              (long long)sum_bad, (long long)sum_lib)};
}

// 10. Log-log slope of full_color discrepancy.
Outcome criterion10() {
  struct Ladder {
    int d;
    std::vector<Coord> sizes;
    double lo, hi;
  };
  const Ladder ladders[] = {{1, {64, 128, 256, 512, 1024, 2048, 4096}, kSlope1Lo, kSlope1Hi},
                            {2, {8, 16, 32, 64}, kSlope2Lo, kSlope2Hi}};
  bool pass = true;
  std::string detail;
  std::int64_t ledger_bad = 0;
  for (const auto& lad : ladders) {
    std::vector<double> xs, ys, walk;
    std::string per;
    for (auto N : lad.sizes) {
      double mean = 0;
      for (int seed = 0; seed < kScalingSeeds; ++seed) {
        SolveConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const GridShape shape(std::vector<Coord>(static_cast<std::size_t>(lad.d), N));
        const auto res = full_color(shape, cfg);
        const auto disc = disc_eval(res.chi, 4).value;
        ledger_bad += static_cast<double>(disc) > res.ledger_bound;
        xs.push_back(static_cast<double>(N));
        ys.push_back(static_cast<double>(disc));
        walk.push_back(static_cast<double>(res.polish.before));
        mean += static_cast<double>(disc) / kScalingSeeds;
      }
      per += fmt(" %lld:%.1f", (long long)N, mean);
    }
    const auto f = fit_log_slope(xs, ys);
    const auto w = fit_log_slope(xs, walk);
    const bool ok = f.slope >= lad.lo && f.slope <= lad.hi;
    pass = pass && ok;
    detail += fmt("d=%d slope %.3f in [%.2f, %.2f]? %s (ci95 [%.3f, %.3f]; before local search "
                  "%.3f; mean disc%s); ",
                  lad.d, f.slope, lad.lo, lad.hi, ok ? "yes" : "no", f.lo, f.hi, w.slope, per.c_str());
  }
  detail += fmt("ledger exceeded %lld times", (long long)ledger_bad);
  return {pass && ledger_bad == 0, detail};
}

// 11. Slice extension.
Outcome criterion11() {
  std::mt19937_64 rng(1111);
  std::int64_t bad = 0, structure = 0;
  const std::vector<std::vector<Coord>> bases = {{8}, {16}, {30}, {4, 4}, {6, 5}, {3, 3, 2}};
  for (int t = 0; t < 200; ++t) {
    const GridShape base(bases[t % bases.size()]);
    PartialColoring chi0 = t % 3 == 0 ? full_color(base, SolveConfig{}).chi
                                      : oracle::random_coloring(base, rng);
    const Coord nd = 1 + static_cast<Coord>(rng() % 6);
    SolveConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto sl = slice_extend(chi0, nd, cfg, static_cast<std::uint64_t>(t));
    const double thr =
        std::sqrt(6.0 * static_cast<double>(nd) * std::log(2.0 * static_cast<double>(base.size() * nd)));
    const auto d0 = disc_eval(chi0).value;
    const auto d1 = disc_eval(sl.chi).value;
    bad += static_cast<double>(d1) > std::max(static_cast<double>(d0), thr) ||
           std::abs(sl.threshold - thr) > 1e-12 * thr;
    // chi(x, k) = chi0(x) v_k.
    for (Coord k = 0; k < nd; ++k) {
      const int v = sl.chi.at(k) * chi0.at(0);
      for (std::int64_t i = 0; i < base.size(); ++i)
        structure += sl.chi.at(i * nd + k) != chi0.at(i) * v;
    }
  }
  return {bad == 0 && structure == 0,
          fmt("200 runs: %lld bound violations, %lld product-structure faults", (long long)bad,
              (long long)structure)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// 12. Same seed, same bytes.
Outcome criterion12() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / ("apdisc_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) { return run_cli(args, sink, sink); };
  int mismatches = 0, errors = 0, cases = 0;
  auto twice = [&](const std::vector<std::string>& base, const std::string& name) {
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
      const auto path = (dir / (name + std::to_string(k))).string();
      auto args = base;
      args.push_back("--out");
      args.push_back(path);
      errors += run(args) != 0;
      out[k] = slurp(path);
    }
    ++cases;
    mismatches += out[0] != out[1] || out[0].empty();
  };
  twice({"color", "--shape", "256", "--seed", "7"}, "c1d");
  twice({"color", "--shape", "16,16", "--seed", "3"}, "c2d");
  twice({"color", "--shape", "32,4,2", "--seed", "5"}, "c3d");
  twice({"color", "--shape", "64", "--method", "random", "--seed", "9"}, "crand");
  twice({"sweep", "--d", "1", "--shapes", "64", "128", "--reps", "2", "--no-timing", "--seed", "4"},
        "sweep");
  twice({"verify", "--suite", "counting", "--trials", "20", "--seed", "2"}, "verify");
  fs::remove_all(dir);
  return {mismatches == 0 && errors == 0,
          fmt("%d output pairs: %d differ, %d runs failed", cases, mismatches, errors)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"disc_eval equals exhaustive AP enumeration", criterion1},
      {"canonical decomposition", criterion2},
      {"counting bounds", criterion3},
      {"projection map conditions", criterion4},
      {"preimage counts", criterion5},
      {"small normalized directions", criterion6},
      {"pair-intersection inequality", criterion7},
      {"energy inequality and exact floor", criterion8},
      {"schedule feasibility", criterion9},
      {"discrepancy scaling", criterion10},
      {"slice extension", criterion11},
      {"determinism", criterion12},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k - 1].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << k << " (" << criteria[k - 1].first << "): "
              << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << fmt("  [%.1f s]", sec) << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
