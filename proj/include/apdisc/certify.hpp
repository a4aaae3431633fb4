#pragma once

#include <cstdint>
#include <vector>

#include "apdisc/grid.hpp"

namespace apdisc {

// Floor c_d R on the discrepancy of every coloring, with the window length L
// and direction box D used to prove it.
struct LowerBoundCert {
  GridShape shape;
  double R = 1;
  std::vector<std::size_t> I_star;  // 0-based axes attaining R
  std::int64_t L = 1;
  std::vector<std::int64_t> D;
  double c_d = 0;  // 6^(-d/2) / 2
  double value = 0;
  bool product_below_three = false;
  bool small_R = false;  // R <= 2: the floor is below 1 and holds trivially

  // L <= prod(D_i + 1) / 2 and D != 0.
  bool hypothesis_holds() const;
};

// R = max_I (prod_{i in I} N_i)^(1/(2|I|+2)), L = max(1, floor(R^2 / 2)),
// D_i = floor(N_i / R^2) on I_star and 0 elsewhere.
LowerBoundCert lower_bound_value(const GridShape& shape);

// Certificate with caller-chosen L and D; value is left at c_d R.
LowerBoundCert manual_cert(const GridShape& shape, std::int64_t L, std::vector<std::int64_t> D);

struct EnergyResult {
  std::int64_t lhs = 0;  // sum over b in B, x in Z^d of (g_b * chi)(x)^2
  double rhs = 0;        // (4 / pi^2) L^2 prod N_i
  std::int64_t directions = 0;  // |B|
  bool pass = false;
};

// Direct convolution with g_b = indicator of {0, b, .., (L-1) b} over all
// nonzero b in prod[-D_i, D_i], both signs. Requires a full coloring and
// cert.hypothesis_holds().
EnergyResult energy_inequality_check(const PartialColoring& chi, const LowerBoundCert& cert);

struct FloorReport {
  LowerBoundCert cert;
  std::int64_t exact = 0;
  bool floor_ok = false;        // exact >= value
  bool chain_applicable = false;
  std::int64_t energy = 0;      // energy lhs of the exact witness
  std::int64_t chain_rhs = 0;   // T^2 prod (N_i + 2 L D_i)(2 D_i + 1), T = exact
  bool chain_ok = false;
  bool energy_ok = false;       // energy >= (4 / pi^2) L^2 prod N_i

  bool ok() const { return floor_ok && (!chain_applicable || (chain_ok && energy_ok)); }
};

FloorReport certified_floor_check(const GridShape& shape, std::int64_t cap = 24);

}  // namespace apdisc
