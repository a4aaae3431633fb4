#include "apdisc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "apdisc/canonical.hpp"
#include "apdisc/error.hpp"

namespace apdisc {

namespace {

BigInt floor_div(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt r = n / d;
  if (n % d != 0 && (n < 0) != (d < 0)) --r;
  return r;
}

BigInt round_nearest(const Rational& q) { return floor_div(q + Rational(1, 2)); }

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Determinant of a square rational matrix by elimination.
Rational determinant(std::vector<RVec> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) std::swap(a[p], a[c]), det = -det;
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

std::vector<RVec> inverse(std::vector<RVec> a) {
  const std::size_t n = a.size();
  std::vector<RVec> inv(n, RVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw InputError("singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (std::size_t k = 0; k < n; ++k) a[c][k] /= piv, inv[c][k] /= piv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) a[r][k] -= f * a[c][k], inv[r][k] -= f * inv[c][k];
    }
  }
  return inv;
}

std::int64_t to_i64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

Rational l1(const RVec& v) {
  Rational s = 0;
  for (const auto& x : v) s += abs_q(x);
  return s;
}

// Odometer step over prod[-lim_j, lim_j]; false after the last point.
bool advance(std::vector<std::int64_t>& c, const std::vector<std::int64_t>& lim) {
  for (std::size_t j = c.size(); j-- > 0;) {
    if (c[j] < lim[j]) {
      ++c[j];
      return true;
    }
    c[j] = -lim[j];
  }
  return false;
}

void check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("projection map invariant failed: ") + what);
}

}  // namespace

Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

LatticeBasis::LatticeBasis(std::vector<RVec> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw InputError("lattice basis is empty");
  for (const auto& v : vectors_)
    if (v.size() != vectors_[0].size() || v.empty()) throw InputError("basis vectors of mixed length");
  if (vectors_.size() > vectors_[0].size() || gram_determinant() == 0)
    throw InputError("basis vectors are linearly dependent");
}

LatticeBasis LatticeBasis::from_integers(const IMatrix& rows) {
  std::vector<RVec> v;
  for (const auto& r : rows) v.emplace_back(r.begin(), r.end());
  return LatticeBasis(std::move(v));
}

Rational LatticeBasis::gram_determinant() const {
  const std::size_t k = vectors_.size();
  std::vector<RVec> g(k, RVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g[i][j] = dot(vectors_[i], vectors_[j]);
  return determinant(std::move(g));
}

bool LatticeBasis::is_integral() const {
  for (const auto& v : vectors_)
    for (const auto& x : v)
      if (boost::multiprecision::denominator(x) != 1) return false;
  return true;
}

IMatrix LatticeBasis::to_integers() const {
  if (!is_integral()) throw InputError("basis is not integral");
  IMatrix out;
  for (const auto& v : vectors_) {
    std::vector<std::int64_t> row;
    for (const auto& x : v) row.push_back(to_i64(boost::multiprecision::numerator(x)));
    out.push_back(std::move(row));
  }
  return out;
}

GramSchmidt gram_schmidt(const std::vector<RVec>& b) {
  const std::size_t k = b.size();
  GramSchmidt gs;
  gs.ortho = b;
  gs.mu.assign(k, RVec(k, 0));
  gs.norms.assign(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      gs.mu[i][j] = dot(b[i], gs.ortho[j]) / gs.norms[j];
      for (std::size_t c = 0; c < b[i].size(); ++c) gs.ortho[i][c] -= gs.mu[i][j] * gs.ortho[j][c];
    }
    gs.mu[i][i] = 1;
    gs.norms[i] = dot(gs.ortho[i], gs.ortho[i]);
  }
  return gs;
}

LatticeBasis lll_reduce(const LatticeBasis& basis, const Rational& delta) {
  if (!(delta > Rational(1, 4) && delta < 1)) throw InputError("LLL delta must lie in (1/4, 1)");
  std::vector<RVec> b = basis.vectors();
  const std::size_t k = b.size();
  GramSchmidt gs = gram_schmidt(b);
  std::size_t i = 1;
  while (i < k) {
    for (std::size_t j = i; j-- > 0;) {
      BigInt q = round_nearest(gs.mu[i][j]);
      if (q == 0) continue;
      Rational qr(q);
      for (std::size_t c = 0; c < b[i].size(); ++c) b[i][c] -= qr * b[j][c];
      for (std::size_t t = 0; t < j; ++t) gs.mu[i][t] -= qr * gs.mu[j][t];
      gs.mu[i][j] -= qr;
    }
    const Rational& m = gs.mu[i][i - 1];
    if (gs.norms[i] >= (delta - m * m) * gs.norms[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      gs = gram_schmidt(b);
      i = std::max<std::size_t>(i - 1, 1);
    }
  }
  return LatticeBasis(std::move(b));
}

bool is_lll_reduced(const LatticeBasis& basis, const Rational& delta) {
  GramSchmidt gs = gram_schmidt(basis.vectors());
  const std::size_t k = basis.rank();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs_q(gs.mu[i][j]) > Rational(1, 2)) return false;
  for (std::size_t i = 1; i < k; ++i) {
    const Rational& m = gs.mu[i][i - 1];
    if (gs.norms[i] < (delta - m * m) * gs.norms[i - 1]) return false;
  }
  return true;
}

std::vector<std::vector<BigInt>> hermite_normal_form(std::vector<std::vector<BigInt>> a) {
  if (a.empty()) return a;
  const std::size_t k = a.size(), n = a[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < k; ++col) {
    for (std::size_t i = row + 1; i < k; ++i) {
      while (a[i][col] != 0) {
        // Euclid on (a[row][col], a[i][col]) with unimodular row moves.
        if (a[row][col] == 0) {
          std::swap(a[row], a[i]);
          continue;
        }
        BigInt q = a[i][col] / a[row][col];
        for (std::size_t c = col; c < n; ++c) a[i][c] -= q * a[row][c];
        if (a[i][col] != 0) std::swap(a[row], a[i]);
      }
    }
    if (a[row][col] == 0) continue;
    if (a[row][col] < 0)
      for (auto& x : a[row]) x = -x;
    for (std::size_t r = 0; r < row; ++r) {
      BigInt q = floor_div(Rational(a[r][col], a[row][col]));
      if (q != 0)
        for (std::size_t c = col; c < n; ++c) a[r][c] -= q * a[row][c];
    }
    ++row;
  }
  a.resize(row);
  return a;
}

std::pair<BigInt, std::vector<std::vector<BigInt>>> hermite_normal_form(const LatticeBasis& basis) {
  BigInt l = 1;
  for (const auto& v : basis.vectors())
    for (const auto& x : v) {
      BigInt d = boost::multiprecision::denominator(x);
      l = l / boost::multiprecision::gcd(l, d) * d;
    }
  std::vector<std::vector<BigInt>> rows;
  for (const auto& v : basis.vectors()) {
    std::vector<BigInt> r;
    for (const auto& x : v) r.push_back(boost::multiprecision::numerator(x * Rational(l)));
    rows.push_back(std::move(r));
  }
  return {l, hermite_normal_form(std::move(rows))};
}

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b) {
  if (a.ambient() != b.ambient() || a.rank() != b.rank()) return false;
  auto ha = hermite_normal_form(a);
  auto hb = hermite_normal_form(b);
  if (ha.first == hb.first) return ha.second == hb.second;
  // Bring both to a common scale before comparing.
  BigInt l = ha.first / boost::multiprecision::gcd(ha.first, hb.first) * hb.first;
  auto rescale = [&](const LatticeBasis& x) {
    std::vector<std::vector<BigInt>> rows;
    for (const auto& v : x.vectors()) {
      std::vector<BigInt> r;
      for (const auto& c : v) r.push_back(boost::multiprecision::numerator(c * Rational(l)));
      rows.push_back(std::move(r));
    }
    return hermite_normal_form(std::move(rows));
  };
  return rescale(a) == rescale(b);
}

IMatrix integer_kernel_basis(std::span<const std::int64_t> b) {
  const std::size_t d = b.size();
  if (d < 2) throw InputError("kernel basis needs dimension >= 2");
  std::int64_t g = 0;
  for (auto v : b) g = std::gcd(g, v);
  if (g == 0) throw InputError("direction must be nonzero");
  if (g != 1) throw InputError("direction must be primitive (gcd 1)");

  // Column operations U with b U = (±1, 0, .., 0); columns 2..d of U span the kernel.
  std::vector<BigInt> w(b.begin(), b.end());
  std::vector<std::vector<BigInt>> U(d, std::vector<BigInt>(d, 0));
  for (std::size_t i = 0; i < d; ++i) U[i][i] = 1;
  for (std::size_t i = 1; i < d; ++i) {
    if (w[i] == 0) continue;
    // Extended gcd of (w0, wi).
    BigInt r0 = w[0], r1 = w[i], s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      BigInt q = r0 / r1;
      BigInt tmp = r0 - q * r1;
      r0 = r1, r1 = tmp;
      tmp = s0 - q * s1, s0 = s1, s1 = tmp;
      tmp = t0 - q * t1, t0 = t1, t1 = tmp;
    }
    const BigInt& gg = r0;  // s0 w0 + t0 wi = gg
    BigInt a = w[i] / gg, c = w[0] / gg;
    for (std::size_t r = 0; r < d; ++r) {
      BigInt c0 = U[r][0], ci = U[r][i];
      U[r][0] = s0 * c0 + t0 * ci;
      U[r][i] = -a * c0 + c * ci;
    }
    w[0] = gg;
    w[i] = 0;
  }
  std::vector<RVec> kernel;
  for (std::size_t j = 1; j < d; ++j) {
    RVec v(d);
    for (std::size_t r = 0; r < d; ++r) v[r] = Rational(U[r][j]);
    kernel.push_back(std::move(v));
  }
  IMatrix out = lll_reduce(LatticeBasis(std::move(kernel))).to_integers();
  for (auto& row : out) {
    auto it = std::find_if(row.begin(), row.end(), [](std::int64_t x) { return x != 0; });
    if (it != row.end() && *it < 0)
      for (auto& x : row) x = -x;
  }
  return out;
}

ProjectionMap projection_map(std::span<const std::int64_t> b, const GridShape& shape) {
  const std::size_t d = shape.dim();
  if (d < 2) throw InputError("projection map needs dimension >= 2");
  if (b.size() != d) throw InputError("direction dimension mismatch");
  std::int64_t g = 0;
  for (auto v : b) g = std::gcd(g, v);
  if (g == 0) throw InputError("direction must be nonzero");

  ProjectionMap pm;
  pm.shape = shape;
  pm.source.assign(b.begin(), b.end());
  for (auto v : b) pm.primitive.push_back(v / g);
  pm.lambda = 0;
  for (std::size_t i = 0; i < d; ++i)
    pm.lambda = std::max(pm.lambda, Rational(std::abs(pm.primitive[i]), shape.extent(i)));
  if (pm.lambda > 1) throw InputError("need |b_i| / gcd(b) <= N_i on every axis");

  // Lambda* = diag(N) ker(b/g); primitive b/g keeps it saturated.
  IMatrix K = integer_kernel_basis(pm.primitive);
  std::vector<RVec> rstar;
  for (const auto& r : K) {
    RVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = Rational(r[i] * shape.extent(i));
    rstar.push_back(std::move(v));
  }
  Rational prodN = Rational(shape.size());
  RVec bstar(d);
  for (std::size_t i = 0; i < d; ++i) bstar[i] = Rational(pm.primitive[i], shape.extent(i));
  const Rational bstar_sq = dot(bstar, bstar);
  LatticeBasis lam(rstar);
  check(lam.gram_determinant() == prodN * prodN * bstar_sq, "det(Lambda*) = |b*| prod N");

  auto reduced = lll_reduce(lam).vectors();
  pm.lll_product_sq = 1;
  Rational prod_target = 1;
  for (const auto& rs : reduced) {
    std::vector<std::int64_t> row(d);
    for (std::size_t i = 0; i < d; ++i) {
      Rational q = rs[i] / Rational(shape.extent(i));
      check(boost::multiprecision::denominator(q) == 1, "r*_j divisible by N");
      row[i] = to_i64(boost::multiprecision::numerator(q));
    }
    pm.M.push_back(row);
    const std::int64_t n1 = to_i64(boost::multiprecision::numerator(l1(rs)));
    pm.target.push_back(3 * n1);
    pm.v.push_back(2 * n1);
    pm.lll_product_sq *= dot(rs, rs);
    prod_target *= Rational(3 * n1);
  }

  const std::size_t e = (d - 1) * (d - 2) / 2;
  pm.lll_bound_sq = Rational(BigInt(1) << e) * bstar_sq * prodN * prodN;
  pm.lll_ratio_bstar = std::sqrt(static_cast<double>(pm.lll_product_sq / pm.lll_bound_sq));
  Rational bp_sq = 0;
  for (auto v : pm.primitive) bp_sq += Rational(v * v);
  pm.lll_ratio_b = std::sqrt(
      static_cast<double>(pm.lll_product_sq / (Rational(BigInt(1) << e) * bp_sq * prodN * prodN)));
  pm.volume_ratio = prod_target / (pm.lambda * prodN);

  for (const auto& row : pm.M) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < d; ++i) s += row[i] * pm.primitive[i];
    check(s == 0, "M b = 0");
  }
  check(LatticeBasis::from_integers(pm.M).gram_determinant() != 0, "rank d-1");
  check(pm.lll_product_sq <= pm.lll_bound_sq, "LLL product bound");
  check(pm.volume_ratio >= Rational(1, 2), "volume ratio >= 1/2");
  check(pm.volume_ratio <= Rational(BigInt(1) << (d * d)), "volume ratio <= 2^(d^2)");
  for (auto t : pm.target) check(t >= shape.min_extent(), "N*_j >= min N_i");
  return pm;
}

std::vector<std::int64_t> apply(const ProjectionMap& pm, std::span<const Coord> x) {
  if (x.size() != pm.shape.dim()) throw InputError("point dimension mismatch");
  std::vector<std::int64_t> y(pm.M.size());
  for (std::size_t j = 0; j < pm.M.size(); ++j) {
    std::int64_t s = pm.v[j];
    for (std::size_t i = 0; i < x.size(); ++i) s += pm.M[j][i] * x[i];
    y[j] = s;
  }
  return y;
}

FiberStats fiber_counts(const ProjectionMap& pm, std::span<const Point> X, std::int64_t s) {
  FiberStats st;
  st.lower = s;
  st.upper = Rational(2) / pm.lambda;
  if (X.empty()) return st;
  if (s < 1 || s > pm.shape.min_extent()) throw InputError("need 1 <= s <= min N_i");
  for (const auto& p : X)
    if (!pm.shape.contains(p)) throw InputError("point outside grid");
  std::map<std::vector<std::int64_t>, std::int64_t> fibers;
  for (const auto& p : u_set(X, pm.source, s)) ++fibers[apdisc::apply(pm, p)];
  st.images = static_cast<std::int64_t>(fibers.size());
  bool first = true;
  for (const auto& [img, c] : fibers) {
    st.preimages += c;
    st.min_count = first ? c : std::min(st.min_count, c);
    st.max_count = first ? c : std::max(st.max_count, c);
    first = false;
    if (c < s || Rational(c) > st.upper) st.ok = false;
  }
  return st;
}

MinkowskiResult minkowski_witness(const std::vector<Rational>& h, const LatticeBasis& lattice,
                                  std::int64_t max_candidates) {
  const std::size_t n = lattice.ambient();
  if (lattice.rank() != n) throw InputError("Minkowski search needs a full-rank lattice");
  if (h.size() != n) throw InputError("box dimension mismatch");
  for (const auto& x : h)
    if (x <= 0) throw InputError("box half-widths must be positive");
  MinkowskiResult res;
  res.volume = 1;
  for (const auto& x : h) res.volume *= 2 * x;
  res.threshold = Rational(BigInt(1) << n) * abs_q(determinant(lattice.vectors()));
  if (!(res.volume > res.threshold)) return res;

  // x = sum_j c_j v_j, so c = x V^{-1}; |c_j| <= sum_i |Vinv_ij| h_i.
  auto Vinv = inverse(lattice.vectors());
  std::vector<std::int64_t> lim(n);
  double cells = 1;
  for (std::size_t j = 0; j < n; ++j) {
    Rational r = 0;
    for (std::size_t i = 0; i < n; ++i) r += abs_q(Vinv[i][j]) * h[i];
    lim[j] = to_i64(floor_div(r));
    cells *= static_cast<double>(2 * lim[j] + 1);
  }
  if (cells > static_cast<double>(max_candidates)) throw SolveError("Minkowski search box too large");

  std::vector<std::int64_t> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = -lim[j];
  // Smallest box gauge, ties broken by Euclidean length.
  std::optional<std::pair<Rational, Rational>> best_score;
  while (true) {
    if (std::any_of(c.begin(), c.end(), [](std::int64_t x) { return x != 0; })) {
      RVec x(n, 0);
      for (std::size_t j = 0; j < n; ++j)
        if (c[j] != 0)
          for (std::size_t i = 0; i < n; ++i) x[i] += Rational(c[j]) * lattice.vectors()[j][i];
      std::pair<Rational, Rational> score{0, dot(x, x)};
      for (std::size_t i = 0; i < n; ++i) score.first = std::max(score.first, abs_q(x[i]) / h[i]);
      if (score.first <= 1 && (!best_score || score < *best_score)) {
        best_score = score;
        res.point = x;
      }
    }
    if (!advance(c, lim)) break;
  }
  if (!res.point) throw std::logic_error("Minkowski search found no point despite the volume condition");
  res.status = MinkowskiStatus::Found;
  return res;
}

IMatrix read_basis(std::istream& in) {
  long long k = 0, n = 0;
  if (!(in >> k >> n) || k < 1 || n < 1) throw InputError("basis file: bad header");
  IMatrix rows(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
  for (auto& r : rows)
    for (auto& x : r) {
      std::string tok;
      if (!(in >> tok)) throw InputError("basis file: too few entries");
      std::size_t used = 0;
      try {
        x = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw InputError("basis file: bad entry '" + tok + "'");
      }
      if (used != tok.size()) throw InputError("basis file: bad entry '" + tok + "'");
    }
  std::string extra;
  if (in >> extra) throw InputError("basis file: trailing data");
  return rows;
}

void write_basis(std::ostream& out, const IMatrix& rows) {
  out << rows.size() << ' ' << (rows.empty() ? 0 : rows[0].size()) << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
    out << '\n';
  }
}

}  // namespace apdisc
