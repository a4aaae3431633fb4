#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apdisc/grid.hpp"
#include "apdisc/schedule.hpp"

namespace apdisc {

enum class Method { PartialColoring, Random, Exact };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct SolveConfig {
  Method method = Method::PartialColoring;
  std::uint64_t seed = 0;
  double delta_scale = 1.0;
  // Constant in b(s) used by the walk. The constant that makes the entropy
  // argument go through leaves every constraint vacuous at tractable sizes.
  double schedule_c = 1.0;
  int max_rounds = 200;
  int max_retries = 12;
  double retry_growth = 1.25;
  double step = 0.1;           // walk step length
  int max_steps = 0;           // 0: 16 / step^2
  double stop_fraction = 0.5;  // stop once this fraction of variables is frozen
  // Per-size floor on the allowance: sizes with f(s, X) > budget * |X| blocks
  // get at least sqrt(2 s log(f / (budget |X|))), so that about budget * |X|
  // blocks of each size are expected to go tight.
  double entropy_budget = 0.05;
  double round_theta = 0.125;  // |x| >= 1 - theta rounds to sign(x)
  std::int64_t exact_cap = 24;
  int slice_resample_cap = 1000;
  // Local-search flips per cell after full_color; 0 disables.
  int polish_sweeps = 100;
  unsigned threads = 1;

  void validate() const;
};

DeltaSchedule schedule_for(const GridShape& shape, std::int64_t m, const SolveConfig& cfg);

// Allowance for canonical sets of one size of X.
struct SizeAllowance {
  std::int64_t size = 0;
  std::int64_t count = 0;   // f(size, X)
  double schedule = 0;      // delta_scale * b(size)
  double allowance = 0;     // max(schedule, delta_scale * budget floor)
  bool tracked() const { return count > 0 && allowance < static_cast<double>(size); }
};

// Dyadic sizes 2 <= s <= max N.
std::vector<SizeAllowance> size_allowances(const GridShape& shape, const std::vector<char>& mask,
                                           const DeltaSchedule& sched, double delta_scale,
                                           double budget);

struct Violation {
  double ratio = 0;  // max |chi(S)| / allowance over tracked S
  std::int64_t size = 0;
  std::int64_t sum = 0;
};

// Checks every canonical set of X (given as a mask) of a tracked size.
Violation max_violation(const PartialColoring& chi, const std::vector<char>& mask,
                        const std::vector<SizeAllowance>& sizes);

// 2 (1 + sum_{s = 2^t <= max N, s >= 2} min(s, allowance(s))).
double round_bound(const std::vector<SizeAllowance>& sizes);

struct PartialResult {
  PartialColoring chi;  // zero outside X
  std::int64_t size = 0;
  std::int64_t colored = 0;
  double delta_scale = 1;
  int retries = 0;
  int steps = 0;
  std::int64_t tight_rows = 0;
  std::int64_t frozen = 0;
  Violation worst;
  std::vector<SizeAllowance> sizes;
  double bound = 0;  // round_bound at the final delta_scale
};

PartialResult partial_color_step(const GridShape& shape, const std::vector<char>& mask,
                                 const DeltaSchedule& sched, const SolveConfig& cfg,
                                 std::uint64_t round = 0);
PartialResult partial_color_step(const std::vector<Point>& X, const GridShape& shape,
                                 const DeltaSchedule& sched, const SolveConfig& cfg,
                                 std::uint64_t round = 0);

struct RoundRecord {
  int round = 0;
  std::int64_t uncolored_before = 0;
  std::int64_t colored = 0;
  double delta_scale = 1;
  int retries = 0;
  int steps = 0;
  std::int64_t tight_rows = 0;
  double max_ratio = 0;
  double bound = 0;
};

struct PolishStats {
  std::int64_t before = 0;  // disc_eval on entry
  std::int64_t after = 0;
  std::int64_t tried = 0;
  std::int64_t accepted = 0;
};

// Local search on a full coloring: flips cells (mostly inside the extremal
// segment of a run attaining the maximum, otherwise uniform) and keeps a flip
// when disc_eval does not rise and the number of maximal runs attaining it
// does not grow. Never increases disc_eval.
PolishStats polish(PartialColoring& chi, std::int64_t flips, std::uint64_t seed,
                   unsigned threads = 1);

struct ColoringResult {
  PartialColoring chi;
  Method method = Method::PartialColoring;
  std::vector<RoundRecord> rounds;
  double ledger_bound = 0;  // guaranteed upper bound on disc_eval(chi)
  int truncation = 0;       // axes colored by full_color (compose_general)
  std::vector<double> slice_thresholds;
  std::string schedule;
  PolishStats polish;       // before == after == 0 when skipped
};

ColoringResult full_color(const GridShape& shape, const SolveConfig& cfg);

struct SliceResult {
  PartialColoring chi;
  double threshold = 0;
  std::int64_t sliced_disc = 0;  // disc over APs moving along the new axis
  int resamples = 0;
};

// sqrt(6 Nd log(2 N_1...N_d)).
double slice_threshold(const GridShape& extended);

SliceResult slice_extend(const PartialColoring& base, Coord nd, const SolveConfig& cfg,
                         std::uint64_t round = 0);

// First i (1-based, dims sorted descending) with R_i > N_{i+1} / sqrt(log P),
// R_i = (N_1...N_i)^(1/(i+1)), N_{d+1} = 1.
int truncation_index(const GridShape& shape);

ColoringResult compose_general(const GridShape& shape, const SolveConfig& cfg);

ColoringResult random_coloring(const GridShape& shape, std::uint64_t seed);

struct ExactResult {
  std::int64_t value = 0;
  PartialColoring witness;
  std::uint64_t nodes = 0;
};

ExactResult exact_min_disc(const GridShape& shape, std::int64_t cap = 24);

// Dispatches on cfg.method.
ColoringResult solve(const GridShape& shape, const SolveConfig& cfg);

}  // namespace apdisc
