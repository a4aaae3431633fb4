// Partial coloring by a projected Gaussian walk over the canonical family.

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "apdisc/canonical.hpp"
#include "apdisc/error.hpp"
#include "apdisc/rng.hpp"
#include "apdisc/solver.hpp"

namespace apdisc {

namespace {

using Id = std::int32_t;

// Canonical blocks of X for the tracked sizes, stored per direction as
// concatenated lines of variable ids.
struct BlockSystem {
  struct Dir {
    std::vector<Id> cells;
    std::vector<Id> line_off;               // lines + 1 entries
    std::vector<Id> vpos;                   // var -> position in cells, -1 if absent
    std::vector<std::vector<std::int64_t>> boff;  // per level, lines + 1 entries
    std::vector<std::int64_t> base;         // per level
  };

  std::int64_t n = 0;
  std::vector<std::int64_t> sizes;
  std::vector<double> delta;
  std::vector<Dir> dirs;
  std::int64_t blocks = 0;

  template <class Fn>
  void for_each_block(Fn&& fn) const {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const Dir& D = dirs[k];
      const std::size_t lines = D.line_off.size() - 1;
      for (std::size_t L = 0; L < lines; ++L) {
        const std::int64_t off = D.line_off[L];
        const std::int64_t len = D.line_off[L + 1] - off;
        for (std::size_t t = 0; t < sizes.size(); ++t) {
          const std::int64_t s = sizes[t];
          std::int64_t id = D.base[t] + D.boff[t][L];
          for (std::int64_t j = 0; (j + 1) * s <= len; ++j, ++id) fn(k, t, off + j * s, s, id);
        }
      }
    }
  }

  // fn(block_id, level) for every tracked block containing var v.
  template <class Fn>
  void for_blocks_of(Id v, Fn&& fn) const {
    for (const Dir& D : dirs) {
      const Id pos = D.vpos[v];
      if (pos < 0) continue;
      const auto it = std::upper_bound(D.line_off.begin(), D.line_off.end(), pos);
      const std::size_t L = static_cast<std::size_t>(it - D.line_off.begin()) - 1;
      const std::int64_t p = pos - D.line_off[L];
      const std::int64_t len = D.line_off[L + 1] - D.line_off[L];
      for (std::size_t t = 0; t < sizes.size(); ++t) {
        const std::int64_t j = p / sizes[t];
        if ((j + 1) * sizes[t] <= len) fn(D.base[t] + D.boff[t][L] + j, t);
      }
    }
  }
};

BlockSystem build_system(const GridShape& shape, const std::vector<char>& mask,
                         const std::vector<Id>& var_of, std::int64_t n,
                         const std::vector<SizeAllowance>& allow) {
  BlockSystem sys;
  sys.n = n;
  for (const auto& a : allow) {
    if (!a.tracked()) continue;
    sys.sizes.push_back(a.size);
    sys.delta.push_back(a.allowance);
  }
  if (sys.sizes.empty()) return sys;
  const auto& sizes = sys.sizes;
  const std::int64_t smin = sizes.front();
  std::int64_t positions = 0;
  for (const auto& b : enumerate_directions(shape, smin)) {
    BlockSystem::Dir D;
    D.line_off.push_back(0);
    for (const auto& line : subset_lines(shape, mask, b)) {
      if (static_cast<std::int64_t>(line.size()) < smin) continue;
      for (auto idx : line) D.cells.push_back(var_of[idx]);
      D.line_off.push_back(static_cast<Id>(D.cells.size()));
    }
    if (D.cells.empty()) continue;
    positions += static_cast<std::int64_t>(D.cells.size());
    if (positions > std::numeric_limits<Id>::max() / 2) throw SolveError("walk instance too large");
    D.vpos.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t p = 0; p < D.cells.size(); ++p) D.vpos[D.cells[p]] = static_cast<Id>(p);
    const std::size_t lines = D.line_off.size() - 1;
    for (auto s : sizes) {
      std::vector<std::int64_t> off(lines + 1, 0);
      for (std::size_t L = 0; L < lines; ++L)
        off[L + 1] = off[L] + (D.line_off[L + 1] - D.line_off[L]) / s;
      D.base.push_back(sys.blocks);
      sys.blocks += off.back();
      D.boff.push_back(std::move(off));
    }
    sys.dirs.push_back(std::move(D));
  }
  return sys;
}

// Orthogonal projection onto the complement of a growing set of 0/1 rows,
// kept as an incremental Cholesky factor of their Gram matrix. Rows in the
// span of earlier ones are dropped.
class Projector {
 public:
  explicit Projector(std::int64_t n) : rows_of_(static_cast<std::size_t>(n)) {}

  bool add(std::vector<Id> row) {
    const std::size_t k = rows_.size();
    std::vector<double> z(k, 0.0);
    for (Id v : row)
      for (Id r : rows_of_[v]) z[r] += 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& Li = L_[i];
      double acc = z[i];
      for (std::size_t j = 0; j < i; ++j) acc -= Li[j] * z[j];
      z[i] = acc / Li[i];
    }
    const double self = static_cast<double>(row.size());
    double piv = self;
    for (double zi : z) piv -= zi * zi;
    if (piv <= 1e-8 * self) return false;
    z.push_back(std::sqrt(piv));
    L_.push_back(std::move(z));
    for (Id v : row) rows_of_[v].push_back(static_cast<Id>(k));
    rows_.push_back(std::move(row));
    return true;
  }

  void project(std::vector<double>& g) const {
    const std::size_t k = rows_.size();
    if (k == 0) return;
    std::vector<double> y(k);
    for (std::size_t i = 0; i < k; ++i) {
      double a = 0;
      for (Id v : rows_[i]) a += g[v];
      y[i] = a;
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto& Li = L_[i];
      double acc = y[i];
      for (std::size_t j = 0; j < i; ++j) acc -= Li[j] * y[j];
      y[i] = acc / Li[i];
    }
    for (std::size_t j = k; j-- > 0;) {
      y[j] /= L_[j][j];
      const auto& Lj = L_[j];
      const double yj = y[j];
      for (std::size_t i = 0; i < j; ++i) y[i] -= Lj[i] * yj;
    }
    for (std::size_t i = 0; i < k; ++i)
      for (Id v : rows_[i]) g[v] -= y[i];
  }

  std::int64_t rank() const { return static_cast<std::int64_t>(rows_.size()); }

 private:
  std::vector<std::vector<Id>> rows_;
  std::vector<std::vector<Id>> rows_of_;
  std::vector<std::vector<double>> L_;
};

struct Attempt {
  std::vector<std::int8_t> val;
  int steps = 0;
  std::int64_t tight = 0;
  std::int64_t frozen = 0;
  Violation worst;
};

Attempt run_walk(const BlockSystem& sys, const SolveConfig& cfg, Stream& rng) {
  const std::int64_t n = sys.n;
  const double gamma = cfg.step;
  const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : static_cast<int>(16.0 / (gamma * gamma));
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  std::vector<char> frozen(static_cast<std::size_t>(n), 0);
  std::vector<char> tight(static_cast<std::size_t>(sys.blocks), 0);
  std::vector<double> threshold;
  for (std::size_t t = 0; t < sys.sizes.size(); ++t)
    threshold.push_back(sys.delta[t] - 2 * gamma * std::sqrt(static_cast<double>(sys.sizes[t])));

  Projector proj(n);
  Attempt out;
  std::vector<double> pre;

  auto refresh_tight = [&] {
    std::size_t cur = std::numeric_limits<std::size_t>::max();
    sys.for_each_block([&](std::size_t k, std::size_t t, std::int64_t start, std::int64_t s,
                           std::int64_t id) {
      if (tight[id]) return;
      if (k != cur) {
        const auto& D = sys.dirs[k];
        pre.assign(D.cells.size() + 1, 0.0);
        for (std::size_t p = 0; p < D.cells.size(); ++p) pre[p + 1] = pre[p] + x[D.cells[p]];
        cur = k;
      }
      const double sum = pre[start + s] - pre[start];
      if (std::abs(sum) >= threshold[t]) {
        tight[id] = 1;
        const auto& cells = sys.dirs[k].cells;
        proj.add(std::vector<Id>(cells.begin() + start, cells.begin() + start + s));
        ++out.tight;
      }
    });
  };

  std::int64_t nfrozen = 0;
  const double stop_at = cfg.stop_fraction * static_cast<double>(n);
  refresh_tight();
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int step = 0; step < max_steps; ++step) {
    if (proj.rank() >= n || static_cast<double>(nfrozen) >= stop_at) break;
    for (std::int64_t v = 0; v < n; ++v) g[v] = frozen[v] ? 0.0 : rng.normal();
    proj.project(g);
    double norm2 = 0;
    for (std::int64_t v = 0; v < n; ++v) {
      if (frozen[v]) g[v] = 0;
      norm2 += g[v] * g[v];
    }
    if (norm2 < 1e-12) break;
    for (std::int64_t v = 0; v < n; ++v) {
      if (frozen[v]) continue;
      x[v] += gamma * g[v];
      if (std::abs(x[v]) >= 1 - gamma) {
        x[v] = x[v] > 0 ? 1.0 : -1.0;
        frozen[v] = 1;
        ++nfrozen;
        proj.add({static_cast<Id>(v)});
      }
    }
    refresh_tight();
    out.steps = step + 1;
  }
  out.frozen = nfrozen;

  // Rounding: near-integral values take their sign.
  out.val.assign(static_cast<std::size_t>(n), 0);
  const double hi = 1 - cfg.round_theta;
  for (std::int64_t v = 0; v < n; ++v)
    if (std::abs(x[v]) >= hi) out.val[v] = x[v] > 0 ? 1 : -1;

  std::vector<std::int64_t> sums(static_cast<std::size_t>(sys.blocks), 0);
  sys.for_each_block([&](std::size_t k, std::size_t, std::int64_t start, std::int64_t s,
                         std::int64_t id) {
    const auto& cells = sys.dirs[k].cells;
    std::int64_t acc = 0;
    for (std::int64_t p = start; p < start + s; ++p) acc += out.val[cells[p]];
    sums[id] = acc;
  });
  auto set_val = [&](Id v, int nv) {
    const int dv = nv - out.val[v];
    if (dv == 0) return;
    sys.for_blocks_of(v, [&](std::int64_t id, std::size_t) { sums[id] += dv; });
    out.val[v] = static_cast<std::int8_t>(nv);
  };
  auto over = [&](std::int64_t sum, std::size_t t) {
    return static_cast<double>(std::abs(sum)) > sys.delta[t] * (1 + 1e-12);
  };

  // Repair: uncolor same-sign variables inside violated blocks.
  for (bool changed = true; changed;) {
    changed = false;
    sys.for_each_block([&](std::size_t k, std::size_t t, std::int64_t start, std::int64_t s,
                           std::int64_t id) {
      if (!over(sums[id], t)) return;
      const auto& cells = sys.dirs[k].cells;
      std::vector<Id> cand;
      const int sg = sums[id] > 0 ? 1 : -1;
      for (std::int64_t p = start; p < start + s; ++p)
        if (out.val[cells[p]] == sg) cand.push_back(cells[p]);
      std::stable_sort(cand.begin(), cand.end(),
                       [&](Id a, Id b) { return std::abs(x[a]) < std::abs(x[b]); });
      for (Id v : cand) {
        if (!over(sums[id], t)) break;
        set_val(v, 0);
        changed = true;
      }
    });
  }

  // Greedy: color the remaining variables, largest |x| first, when no
  // tracked block would exceed its allowance.
  std::vector<Id> rest;
  for (std::int64_t v = 0; v < n; ++v)
    if (out.val[v] == 0) rest.push_back(static_cast<Id>(v));
  std::stable_sort(rest.begin(), rest.end(),
                   [&](Id a, Id b) { return std::abs(x[a]) > std::abs(x[b]); });
  for (Id v : rest) {
    const int first = x[v] < 0 ? -1 : 1;
    double best = std::numeric_limits<double>::infinity();
    int pick = 0;
    for (int sg : {first, -first}) {
      double worst = 0;
      sys.for_blocks_of(v, [&](std::int64_t id, std::size_t t) {
        worst = std::max(worst, static_cast<double>(std::abs(sums[id] + sg)) / sys.delta[t]);
      });
      if (worst < best) {
        best = worst;
        pick = sg;
      }
    }
    if (best <= 1 + 1e-12) set_val(v, pick);
  }

  sys.for_each_block([&](std::size_t, std::size_t t, std::int64_t, std::int64_t s,
                         std::int64_t id) {
    const double r = static_cast<double>(std::abs(sums[id])) / sys.delta[t];
    if (r > out.worst.ratio) out.worst = Violation{r, s, sums[id]};
  });
  return out;
}

}  // namespace

std::vector<SizeAllowance> size_allowances(const GridShape& shape, const std::vector<char>& mask,
                                           const DeltaSchedule& sched, double delta_scale,
                                           double budget) {
  if (!(budget > 0)) throw InputError("entropy budget must be positive");
  const double m = static_cast<double>(std::count(mask.begin(), mask.end(), char{1}));
  std::vector<SizeAllowance> out;
  for (std::int64_t s = 2; s <= shape.max_extent(); s *= 2) {
    SizeAllowance a;
    a.size = s;
    const double sd = static_cast<double>(s);
    a.schedule = delta_scale * sched(sd);
    a.allowance = a.schedule;
    if (a.schedule < sd && static_cast<double>(s) <= m) {
      a.count = f_count(shape, mask, s);
      const double ratio = static_cast<double>(a.count) / (budget * m);
      if (ratio > 1)
        a.allowance = std::max(a.schedule, delta_scale * std::sqrt(2 * sd * std::log(ratio)));
    }
    out.push_back(a);
  }
  return out;
}

double round_bound(const std::vector<SizeAllowance>& sizes) {
  double total = 1;
  for (const auto& a : sizes) total += std::min(static_cast<double>(a.size), a.allowance);
  return 2 * total;
}

Violation max_violation(const PartialColoring& chi, const std::vector<char>& mask,
                        const std::vector<SizeAllowance>& sizes) {
  Violation out;
  const auto profile = block_sum_profile(chi, mask);
  for (const auto& a : sizes) {
    if (!a.tracked()) continue;
    const auto t = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(a.size)));
    if (t >= profile.size()) continue;
    const double r = static_cast<double>(profile[t]) / a.allowance;
    if (r > out.ratio) out = Violation{r, a.size, profile[t]};
  }
  return out;
}

PartialResult partial_color_step(const GridShape& shape, const std::vector<char>& mask,
                                 const DeltaSchedule& sched, const SolveConfig& cfg,
                                 std::uint64_t round) {
  cfg.validate();
  if (static_cast<std::int64_t>(mask.size()) != shape.size())
    throw InputError("mask size does not match grid");
  std::vector<Id> var_of(static_cast<std::size_t>(shape.size()), -1);
  std::vector<std::int64_t> cell_of;
  for (std::int64_t i = 0; i < shape.size(); ++i)
    if (mask[i]) {
      var_of[i] = static_cast<Id>(cell_of.size());
      cell_of.push_back(i);
    }
  const std::int64_t n = static_cast<std::int64_t>(cell_of.size());
  if (n == 0) throw InputError("partial coloring needs a nonempty set");
  const std::int64_t need = (n + 9) / 10;

  double ds = cfg.delta_scale;
  std::ostringstream diag;
  for (int retry = 0; retry <= cfg.max_retries; ++retry) {
    const auto sizes = size_allowances(shape, mask, sched, ds, cfg.entropy_budget);
    const auto sys = build_system(shape, mask, var_of, n, sizes);
    Stream rng(cfg.seed, round * 1024 + static_cast<std::uint64_t>(retry), "walk");
    Attempt a = run_walk(sys, cfg, rng);
    const std::int64_t colored =
        std::count_if(a.val.begin(), a.val.end(), [](std::int8_t v) { return v != 0; });
    if (colored >= need && (a.worst.ratio <= 1 + 1e-9)) {
      PartialResult r;
      r.chi = PartialColoring(shape);
      for (std::int64_t v = 0; v < n; ++v) r.chi.set(cell_of[v], a.val[v]);
      r.size = n;
      r.colored = colored;
      r.delta_scale = ds;
      r.retries = retry;
      r.steps = a.steps;
      r.tight_rows = a.tight;
      r.frozen = a.frozen;
      r.worst = a.worst;
      r.sizes = sizes;
      r.bound = round_bound(sizes);
      return r;
    }
    diag << " [scale " << ds << ": colored " << colored << "/" << n << ", worst ratio "
         << a.worst.ratio << " at size " << a.worst.size << "]";
    ds *= cfg.retry_growth;
  }
  throw SolveError("partial coloring failed after " + std::to_string(cfg.max_retries) +
                   " retries:" + diag.str());
}

PartialResult partial_color_step(const std::vector<Point>& X, const GridShape& shape,
                                 const DeltaSchedule& sched, const SolveConfig& cfg,
                                 std::uint64_t round) {
  std::vector<char> mask(static_cast<std::size_t>(shape.size()), 0);
  for (const auto& p : X) mask[shape.index_of(p)] = 1;
  return partial_color_step(shape, mask, sched, cfg, round);
}

}  // namespace apdisc
