#include "apdisc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apdisc/error.hpp"
#include "apdisc/rng.hpp"

namespace apdisc {

Method parse_method(const std::string& name) {
  if (name == "partial-coloring") return Method::PartialColoring;
  if (name == "random") return Method::Random;
  if (name == "exact") return Method::Exact;
  throw InputError("unknown method '" + name + "' (partial-coloring, random, exact)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::PartialColoring: return "partial-coloring";
    case Method::Random: return "random";
    case Method::Exact: return "exact";
  }
  return "?";
}

void SolveConfig::validate() const {
  if (!(delta_scale > 0)) throw InputError("delta_scale must be positive");
  if (!(schedule_c > 0)) throw InputError("schedule constant must be positive");
  if (!(step > 0 && step < 1)) throw InputError("walk step must lie in (0, 1)");
  if (!(stop_fraction > 0 && stop_fraction <= 1)) throw InputError("stop fraction must lie in (0, 1]");
  if (!(round_theta > 0 && round_theta < 1)) throw InputError("rounding theta must lie in (0, 1)");
  if (!(entropy_budget > 0)) throw InputError("entropy budget must be positive");
  if (!(retry_growth > 1)) throw InputError("retry growth must exceed 1");
  if (max_rounds < 1 || max_retries < 0 || max_steps < 0 || slice_resample_cap < 1 ||
      polish_sweeps < 0)
    throw InputError("round, retry and step limits must be nonnegative");
  if (exact_cap < 1 || exact_cap > 40) throw InputError("exact cap must lie in [1, 40]");
}

DeltaSchedule schedule_for(const GridShape& shape, std::int64_t m, const SolveConfig& cfg) {
  return DeltaSchedule::for_shape(shape, m, cfg.schedule_c, cfg.schedule_c);
}

ColoringResult full_color(const GridShape& shape, const SolveConfig& cfg) {
  cfg.validate();
  ColoringResult res;
  res.method = Method::PartialColoring;
  res.chi = PartialColoring(shape);
  res.truncation = static_cast<int>(shape.dim());
  std::vector<char> mask(static_cast<std::size_t>(shape.size()), 1);
  std::int64_t remaining = shape.size();
  for (int round = 0; remaining > 0; ++round) {
    if (round >= cfg.max_rounds)
      throw SolveError("full coloring did not finish in " + std::to_string(cfg.max_rounds) +
                       " rounds; " + std::to_string(remaining) + " cells left");
    const auto sched = schedule_for(shape, remaining, cfg);
    if (round == 0) res.schedule = sched.describe();
    auto part = partial_color_step(shape, mask, sched, cfg, static_cast<std::uint64_t>(round));
    for (std::int64_t i = 0; i < shape.size(); ++i) {
      if (part.chi.at(i) != 0) {
        res.chi.set(i, part.chi.at(i));
        mask[i] = 0;
      }
    }
    RoundRecord rec;
    rec.round = round;
    rec.uncolored_before = remaining;
    rec.colored = part.colored;
    rec.delta_scale = part.delta_scale;
    rec.retries = part.retries;
    rec.steps = part.steps;
    rec.tight_rows = part.tight_rows;
    rec.max_ratio = part.worst.ratio;
    rec.bound = part.bound;
    res.rounds.push_back(rec);
    res.ledger_bound += part.bound;
    remaining -= part.colored;
  }
  if (cfg.polish_sweeps > 0)
    res.polish = polish(res.chi, static_cast<std::int64_t>(cfg.polish_sweeps) * shape.size(),
                        cfg.seed, cfg.threads);
  return res;
}

double slice_threshold(const GridShape& extended) {
  const double nd = static_cast<double>(extended.extent(extended.dim() - 1));
  return std::sqrt(6 * nd * std::log(2 * static_cast<double>(extended.size())));
}

SliceResult slice_extend(const PartialColoring& base, Coord nd, const SolveConfig& cfg,
                         std::uint64_t round) {
  if (!base.is_full()) throw InputError("slice extension needs a full coloring");
  if (nd < 1) throw InputError("new axis extent must be positive");
  auto dims = base.shape().dims();
  dims.push_back(nd);
  const GridShape ext(dims);
  SliceResult res;
  res.threshold = slice_threshold(ext);
  const auto moving = [](const Direction& b) { return b.back() != 0; };
  for (int attempt = 0; attempt < cfg.slice_resample_cap; ++attempt) {
    Stream rng(cfg.seed, round * 4096 + static_cast<std::uint64_t>(attempt), "slice");
    std::vector<int> v(static_cast<std::size_t>(nd));
    for (auto& s : v) s = rng.rademacher();
    std::vector<std::int8_t> vals(static_cast<std::size_t>(ext.size()));
    for (std::int64_t i = 0; i < base.shape().size(); ++i)
      for (Coord k = 0; k < nd; ++k) vals[i * nd + k] = static_cast<std::int8_t>(base.at(i) * v[k]);
    PartialColoring chi(ext, std::move(vals));
    const auto d = disc_eval_where(chi, moving, cfg.threads);
    if (static_cast<double>(d.value) <= res.threshold) {
      res.chi = std::move(chi);
      res.sliced_disc = d.value;
      res.resamples = attempt;
      return res;
    }
  }
  throw SolveError("slice extension exceeded " + std::to_string(cfg.slice_resample_cap) +
                   " resamples");
}

int truncation_index(const GridShape& shape) {
  auto dims = shape.dims();
  std::sort(dims.begin(), dims.end(), std::greater<>());
  const int d = static_cast<int>(dims.size());
  const double P = static_cast<double>(shape.size());
  if (P <= 2) return d;
  const double root_log = std::sqrt(std::log(P));
  double logprod = 0;
  for (int i = 1; i <= d; ++i) {
    logprod += std::log(static_cast<double>(dims[i - 1]));
    const double R = std::exp(logprod / (i + 1));
    const double next = i < d ? static_cast<double>(dims[i]) : 1.0;
    if (R > next / root_log) return i;
  }
  return d;
}

namespace {

// out(p) = chi(q) with q[i] = p[perm[i]].
PartialColoring unpermute(const PartialColoring& chi, const std::vector<std::size_t>& perm,
                          const GridShape& target) {
  PartialColoring out(target);
  const auto& src = chi.shape();
  Point q(src.dim());
  for (std::int64_t i = 0; i < target.size(); ++i) {
    const Point p = target.point_of(i);
    for (std::size_t a = 0; a < perm.size(); ++a) q[a] = p[perm[a]];
    out.set(i, chi.at(q));
  }
  return out;
}

}  // namespace

ColoringResult compose_general(const GridShape& shape, const SolveConfig& cfg) {
  cfg.validate();
  const std::size_t d = shape.dim();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return shape.extent(a) > shape.extent(b); });
  std::vector<Coord> sorted(d);
  for (std::size_t i = 0; i < d; ++i) sorted[i] = shape.extent(perm[i]);

  const int t = truncation_index(shape);
  const GridShape head(std::vector<Coord>(sorted.begin(), sorted.begin() + t));
  ColoringResult res = full_color(head, cfg);
  res.truncation = t;
  PartialColoring chi = res.chi;
  double bound = res.ledger_bound;
  for (std::size_t i = static_cast<std::size_t>(t); i < d; ++i) {
    auto sl = slice_extend(chi, sorted[i], cfg, i);
    res.slice_thresholds.push_back(sl.threshold);
    bound = std::max(bound, sl.threshold);
    chi = std::move(sl.chi);
  }
  res.chi = unpermute(chi, perm, shape);
  res.ledger_bound = bound;
  return res;
}

ColoringResult random_coloring(const GridShape& shape, std::uint64_t seed) {
  ColoringResult res;
  res.method = Method::Random;
  res.chi = PartialColoring(shape);
  Stream rng(seed, 0, "random");
  for (std::int64_t i = 0; i < shape.size(); ++i) res.chi.set(i, rng.rademacher());
  res.ledger_bound = static_cast<double>(shape.max_extent());
  res.truncation = static_cast<int>(shape.dim());
  return res;
}

namespace {

class ExactSearch {
 public:
  explicit ExactSearch(const GridShape& shape) : P_(shape.size()), aps_of_(P_) {
    std::vector<std::int64_t> cells;
    for (const auto& b : enumerate_directions(shape, 2)) {
      for_each_line(shape, b, [&](std::int64_t first, std::int64_t step, Coord len) {
        cells.clear();
        for (Coord k = 0; k < len; ++k) cells.push_back(first + k * step);
        for (Coord i = 0; i < len; ++i)
          for (Coord j = i + 1; j < len; ++j) {
            const auto id = static_cast<std::int32_t>(size_.size());
            size_.push_back(static_cast<std::int32_t>(j - i + 1));
            for (Coord k = i; k <= j; ++k) aps_of_[cells[k]].push_back(id);
          }
      });
    }
  }

  bool run(std::int64_t T, std::vector<std::int8_t>& out) {
    T_ = T;
    sum_.assign(size_.size(), 0);
    rem_ = size_;
    val_.assign(static_cast<std::size_t>(P_), 0);
    if (!place(0, 1)) return false;
    const bool ok = dfs(1);
    if (ok) out = val_;
    return ok;
  }

  std::uint64_t nodes = 0;

 private:
  bool place(std::int64_t c, int v) {
    ++nodes;
    val_[c] = static_cast<std::int8_t>(v);
    bool ok = true;
    for (auto id : aps_of_[c]) {
      sum_[id] += v;
      --rem_[id];
      if (std::abs(sum_[id]) - rem_[id] > T_) ok = false;
    }
    return ok;
  }
  void unplace(std::int64_t c) {
    const int v = val_[c];
    for (auto id : aps_of_[c]) {
      sum_[id] -= v;
      ++rem_[id];
    }
    val_[c] = 0;
  }
  bool dfs(std::int64_t c) {
    if (c == P_) return true;
    for (int v : {1, -1}) {
      if (place(c, v) && dfs(c + 1)) return true;
      unplace(c);
    }
    return false;
  }

  std::int64_t P_;
  std::int64_t T_ = 0;
  std::vector<std::vector<std::int32_t>> aps_of_;
  std::vector<std::int32_t> size_, sum_, rem_;
  std::vector<std::int8_t> val_;
};

}  // namespace

ExactResult exact_min_disc(const GridShape& shape, std::int64_t cap) {
  if (shape.size() > cap)
    throw InputError("exact search limited to " + std::to_string(cap) + " cells, grid has " +
                     std::to_string(shape.size()));
  ExactSearch search(shape);
  std::vector<std::int8_t> vals;
  for (std::int64_t T = 1;; ++T) {
    if (search.run(T, vals)) {
      ExactResult r;
      r.value = T;
      r.witness = PartialColoring(shape, vals);
      r.nodes = search.nodes;
      return r;
    }
  }
}

ColoringResult solve(const GridShape& shape, const SolveConfig& cfg) {
  cfg.validate();
  switch (cfg.method) {
    case Method::Random: return random_coloring(shape, cfg.seed);
    case Method::Exact: {
      auto ex = exact_min_disc(shape, cfg.exact_cap);
      ColoringResult res;
      res.method = Method::Exact;
      res.chi = ex.witness;
      res.ledger_bound = static_cast<double>(ex.value);
      res.truncation = static_cast<int>(shape.dim());
      return res;
    }
    case Method::PartialColoring: break;
  }
  return compose_general(shape, cfg);
}

}  // namespace apdisc
