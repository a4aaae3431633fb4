#include "apdisc/certify.hpp"

#include <cmath>
#include <numbers>

#include "apdisc/bounds.hpp"
#include "apdisc/error.hpp"
#include "apdisc/solver.hpp"

namespace apdisc {

namespace {

double c_d(std::size_t d) { return std::pow(6.0, -static_cast<double>(d) / 2) / 2; }

}  // namespace

bool LowerBoundCert::hypothesis_holds() const {
  std::int64_t cells = 1;
  bool nonzero = false;
  for (auto v : D) {
    cells *= v + 1;
    nonzero = nonzero || v > 0;
  }
  return nonzero && L >= 1 && 2 * L <= cells;
}

LowerBoundCert lower_bound_value(const GridShape& shape) {
  LowerBoundCert c;
  c.shape = shape;
  const auto root = max_subset_root(shape);
  c.R = root.R;
  c.I_star = root.I_star;
  c.c_d = c_d(shape.dim());
  c.value = c.c_d * c.R;
  c.product_below_three = shape.size() < 3;
  c.small_R = c.R <= 2;
  const double r2 = c.R * c.R;
  c.L = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(r2 / 2)));
  c.D.assign(shape.dim(), 0);
  for (auto i : c.I_star)
    c.D[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(shape.extent(i)) / r2));
  return c;
}

LowerBoundCert manual_cert(const GridShape& shape, std::int64_t L, std::vector<std::int64_t> D) {
  if (L < 1) throw InputError("window length L must be positive");
  if (D.size() != shape.dim()) throw InputError("direction box needs one entry per axis");
  for (auto v : D)
    if (v < 0) throw InputError("direction box entries must be nonnegative");
  auto c = lower_bound_value(shape);
  c.L = L;
  c.D = std::move(D);
  return c;
}

EnergyResult energy_inequality_check(const PartialColoring& chi, const LowerBoundCert& cert) {
  const auto& shape = chi.shape();
  if (!(shape == cert.shape)) throw InputError("certificate is for a different shape");
  if (!chi.is_full()) throw InputError("energy inequality needs a full coloring");
  if (!cert.hypothesis_holds())
    throw HypothesisError("need D != 0 and L <= prod(D_i + 1) / 2");
  const std::size_t d = shape.dim();
  const std::int64_t L = cert.L;

  // x ranges over prod[1 - L D_i, N_i + L D_i]; outside it every term vanishes.
  std::vector<std::int64_t> lo(d), ext(d);
  std::int64_t box = 1;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = 1 - L * cert.D[i];
    ext[i] = shape.extent(i) + 2 * L * cert.D[i];
    box *= ext[i];
  }

  EnergyResult r;
  std::vector<std::int64_t> b(d), x(d);
  // Odometer over prod[-D_i, D_i].
  for (std::size_t i = 0; i < d; ++i) b[i] = -cert.D[i];
  for (;;) {
    bool zero = true;
    for (auto v : b) zero = zero && v == 0;
    if (!zero) {
      ++r.directions;
      for (std::int64_t cell = 0; cell < box; ++cell) {
        std::int64_t rest = cell;
        for (std::size_t i = d; i-- > 0;) {
          x[i] = lo[i] + rest % ext[i];
          rest /= ext[i];
        }
        std::int64_t conv = 0;
        for (std::int64_t t = 0; t < L; ++t) {
          std::int64_t idx = 0;
          bool inside = true;
          for (std::size_t i = 0; i < d && inside; ++i) {
            const auto y = x[i] - t * b[i];
            inside = y >= 1 && y <= shape.extent(i);
            idx += (y - 1) * shape.stride(i);
          }
          if (inside) conv += chi.at(idx);
        }
        r.lhs += conv * conv;
      }
    }
    std::size_t i = 0;
    while (i < d && b[i] == cert.D[i]) b[i] = -cert.D[i], ++i;
    if (i == d) break;
    ++b[i];
  }
  r.rhs = 4 / (std::numbers::pi * std::numbers::pi) * static_cast<double>(L * L) *
          static_cast<double>(shape.size());
  r.pass = static_cast<double>(r.lhs) >= r.rhs;
  return r;
}

FloorReport certified_floor_check(const GridShape& shape, std::int64_t cap) {
  FloorReport rep;
  rep.cert = lower_bound_value(shape);
  const auto ex = exact_min_disc(shape, cap);
  rep.exact = ex.value;
  rep.floor_ok = static_cast<double>(rep.exact) >= rep.cert.value;
  rep.chain_applicable = rep.cert.hypothesis_holds();
  if (rep.chain_applicable) {
    const auto e = energy_inequality_check(ex.witness, rep.cert);
    rep.energy = e.lhs;
    rep.energy_ok = e.pass;
    std::int64_t rhs = rep.exact * rep.exact;
    for (std::size_t i = 0; i < shape.dim(); ++i)
      rhs *= (shape.extent(i) + 2 * rep.cert.L * rep.cert.D[i]) * (2 * rep.cert.D[i] + 1);
    rep.chain_rhs = rhs;
    rep.chain_ok = rhs >= e.lhs;
  }
  return rep;
}

}  // namespace apdisc
