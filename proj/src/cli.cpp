#include "apdisc/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "apdisc/bounds.hpp"
#include "apdisc/certify.hpp"
#include "apdisc/error.hpp"
#include "apdisc/grid.hpp"
#include "apdisc/lattice.hpp"
#include "apdisc/solver.hpp"
#include "apdisc/verify.hpp"

namespace apdisc {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

std::ostringstream classic_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12);
  return os;
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f) throw InputError("write failed for " + path);
}

struct Context {
  std::vector<std::string> args;
  std::string subcommand;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string manifest;
  std::vector<std::string> outputs;
  Clock::time_point start = Clock::now();
  json result = json::object();

  // Written next to the first output unless a path was given.
  void finish() const {
    std::string path = manifest;
    if (path.empty() && !outputs.empty()) path = outputs.front() + ".manifest.json";
    if (path.empty()) return;
    json m;
    m["subcommand"] = subcommand;
    m["args"] = args;
    m["seed"] = seed;
    m["threads"] = threads;
    m["version"] = kVersion;
    m["csv_schema"] = kCsvSchema;
    m["timing_ms"] = elapsed_ms(start);
    m["outputs"] = outputs;
    m["result"] = result;
    write_text(path, m.dump(2) + "\n");
  }
};

// Sends text to --out when given, else to the stream.
void emit(Context& ctx, const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
    ctx.outputs.push_back(path);
  }
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw InputError("bad rational '" + text + "'");
  }
}

struct ColorOpts {
  std::string shape, method = "partial-coloring", out;
  double delta_scale = 1.0, schedule_c = 1.0;
  int polish_sweeps = SolveConfig{}.polish_sweeps;
};

int cmd_color(Context& ctx, const ColorOpts& o, std::ostream& out, std::ostream& err) {
  const auto shape = parse_shape(o.shape);
  SolveConfig cfg;
  cfg.method = parse_method(o.method);
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  cfg.delta_scale = o.delta_scale;
  cfg.schedule_c = o.schedule_c;
  cfg.polish_sweeps = o.polish_sweeps;
  const auto res = solve(shape, cfg);
  const auto d = disc_eval(res.chi, ctx.threads);
  std::ostringstream file;
  write_coloring(file, res.chi);
  emit(ctx, o.out, file.str(), out);
  auto os = classic_stream();
  os << "shape=" << shape.to_string() << " method=" << method_name(cfg.method)
     << " seed=" << cfg.seed << " disc=" << d.value << " ledger_bound=" << res.ledger_bound
     << " rounds=" << res.rounds.size() << " truncation=" << res.truncation << '\n';
  (o.out.empty() ? err : out) << os.str();
  ctx.result = {{"shape", shape.to_string()},
                {"method", method_name(cfg.method)},
                {"disc", d.value},
                {"witness", format_witness(d.witness)},
                {"ledger_bound", res.ledger_bound},
                {"rounds", res.rounds.size()},
                {"truncation", res.truncation},
                {"schedule", res.schedule},
                {"polish_before", res.polish.before},
                {"polish_after", res.polish.after}};
  return kExitOk;
}

int cmd_eval(Context& ctx, const std::string& in, std::ostream& out) {
  const auto chi = read_coloring_file(in);
  const auto d = disc_eval(chi, ctx.threads);
  out << "disc=" << d.value << " witness " << format_witness(d.witness) << '\n';
  ctx.result = {{"disc", d.value}, {"witness", format_witness(d.witness)}};
  return kExitOk;
}

int cmd_bounds(Context& ctx, const std::string& shape_text, bool csv, double c_upper,
               std::ostream& out) {
  const auto shape = parse_shape(shape_text);
  const auto rep = bound_report(shape, c_upper);
  const auto cert = lower_bound_value(shape);
  std::string istar, dlist;
  for (std::size_t i = 0; i < cert.I_star.size(); ++i)
    istar += (i ? " " : "") + std::to_string(cert.I_star[i] + 1);
  for (std::size_t i = 0; i < cert.D.size(); ++i)
    dlist += (i ? " " : "") + std::to_string(cert.D[i]);
  std::string regime = cert.product_below_three ? "product-below-three"
                       : cert.small_R           ? "R-at-most-2"
                                                : "full";
  auto os = classic_stream();
  if (csv) {
    os << "shape,lower,c_d,R,I_star,L,D,regime,upper,upper_form,upper_constant\n"
       << shape.to_string() << ',' << cert.value << ',' << cert.c_d << ',' << cert.R << ",\""
       << istar << "\"," << cert.L << ",\"" << dlist << "\"," << regime << ',' << rep.upper << ','
       << rep.upper_form << ',' << c_upper << '\n';
  } else {
    os << "shape        " << shape.to_string() << '\n'
       << "lower        " << cert.value << "  (c_d R)\n"
       << "c_d          " << cert.c_d << '\n'
       << "R            " << cert.R << '\n'
       << "I_star       " << istar << '\n'
       << "L            " << cert.L << '\n'
       << "D            " << dlist << '\n'
       << "regime       " << regime << '\n'
       << "upper        " << rep.upper << "  (" << rep.upper_form << " form, C=" << c_upper
       << "; shape, not constant)\n";
    if (rep.almost_cube) os << "delta        " << rep.delta << '\n';
  }
  out << os.str();
  ctx.result = {{"lower", cert.value}, {"R", cert.R}, {"L", cert.L}, {"upper", rep.upper}};
  return kExitOk;
}

int cmd_verify(Context& ctx, const std::string& suite, int trials, const std::string& path,
               std::ostream& out, std::ostream& err) {
  const auto rows = run_suite(parse_suite(suite), trials, ctx.seed);
  std::ostringstream csv;
  write_check_csv(csv, rows);
  emit(ctx, path, csv.str(), out);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  (path.empty() ? err : out) << "checks=" << rows.size() << " failed=" << failed << '\n';
  ctx.result = {{"suite", suite}, {"checks", rows.size()}, {"failed", failed}};
  return failed ? kExitFailure : kExitOk;
}

struct SweepOpts {
  int d = 0;
  std::vector<std::string> shapes;
  int reps = 1;
  bool no_timing = false;
  bool fit = false;
  std::string method = "partial-coloring", out;
  int polish_sweeps = SolveConfig{}.polish_sweeps;
};

int cmd_sweep(Context& ctx, const SweepOpts& o, std::ostream& out, std::ostream& err) {
  if (o.shapes.empty()) throw InputError("sweep needs at least one shape");
  if (o.reps < 1) throw InputError("reps must be positive");
  std::vector<GridShape> ladder;
  for (const auto& s : o.shapes) {
    auto shape = parse_shape(s);
    if (o.d > 1 && shape.dim() == 1)
      shape = GridShape(std::vector<Coord>(static_cast<std::size_t>(o.d), shape.extent(0)));
    if (o.d > 0 && shape.dim() != static_cast<std::size_t>(o.d))
      throw InputError("shape " + s + " does not have dimension " + std::to_string(o.d));
    ladder.push_back(shape);
  }
  auto os = classic_stream();
  os << "shape,seed,disc,ledger_bound,runtime_ms\n";
  std::vector<double> xs, ys;
  for (const auto& shape : ladder) {
    for (int r = 0; r < o.reps; ++r) {
      SolveConfig cfg;
      cfg.method = parse_method(o.method);
      cfg.seed = ctx.seed + static_cast<std::uint64_t>(r);
      cfg.threads = ctx.threads;
      cfg.polish_sweeps = o.polish_sweeps;
      const auto t0 = Clock::now();
      const auto res = solve(shape, cfg);
      const auto d = disc_eval(res.chi, ctx.threads).value;
      const double ms = o.no_timing ? 0.0 : std::round(elapsed_ms(t0));
      os << shape.to_string() << ',' << cfg.seed << ',' << d << ',' << res.ledger_bound << ','
         << ms << '\n';
      xs.push_back(static_cast<double>(shape.max_extent()));
      ys.push_back(static_cast<double>(d));
    }
  }
  emit(ctx, o.out, os.str(), out);
  if (o.fit) {
    if (xs.size() < 2) throw InputError("slope fit needs at least two distinct sizes");
    const auto f = fit_log_slope(xs, ys);
    auto fs = classic_stream();
    fs << std::setprecision(4) << "slope=" << f.slope << " ci95=[" << f.lo << "," << f.hi
       << "] points=" << f.points << '\n';
    (o.out.empty() ? err : out) << fs.str();
    ctx.result["slope"] = f.slope;
    ctx.result["ci95"] = {f.lo, f.hi};
  }
  ctx.result["runs"] = xs.size();
  return kExitOk;
}

int cmd_lll(Context& ctx, const std::string& in, const std::string& path,
            const std::string& delta_text, std::ostream& out) {
  const Rational delta = parse_rational(delta_text);
  if (!(delta > Rational(1, 4) && delta < 1)) throw InputError("LLL delta must lie in (1/4, 1)");
  std::ifstream f(in);
  if (!f) throw InputError("cannot open " + in);
  const auto rows = read_basis(f);
  const auto reduced = lll_reduce(LatticeBasis::from_integers(rows), delta);
  std::ostringstream os;
  write_basis(os, reduced.to_integers());
  emit(ctx, path, os.str(), out);
  ctx.result = {{"rank", reduced.rank()}, {"delta", to_string(delta)}};
  return kExitOk;
}

}  // namespace

SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("slope fit needs paired samples");
  SlopeFit f;
  f.points = x.size();
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw InputError("slope fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0)) throw InputError("slope fit needs at least two distinct sizes");
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - f.intercept - f.slope * std::log(x[i]);
    sse += r * r;
  }
  const double se = x.size() > 2 ? std::sqrt(sse / (n - 2) / (sxx - sx * sx / n)) : 0.0;
  f.lo = f.slope - 1.96 * se;
  f.hi = f.slope + 1.96 * se;
  return f;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic-progression discrepancy toolkit: coloring, evaluation and checks",
               "apdisc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Context ctx;
  ctx.args = args;
  app.add_option("--threads", ctx.threads, "Worker threads for evaluation")
      ->check(CLI::Range(1u, 1024u));

  ColorOpts co;
  auto* color = app.add_subcommand("color", "Build a coloring and write it in coloring-file format");
  color->add_option("--shape", co.shape, "Extents, e.g. 64 or 16,16")->required();
  color->add_option("--method", co.method, "partial-coloring | random | exact");
  color->add_option("--seed", ctx.seed, "RNG seed");
  color->add_option("--out", co.out, "Coloring file (stdout when omitted)");
  color->add_option("--delta-scale", co.delta_scale, "Multiplier on the size allowances");
  color->add_option("--schedule-c", co.schedule_c, "Constant of the size allowance schedule");
  color->add_option("--polish-sweeps", co.polish_sweeps, "Local-search flips per cell; 0 disables");
  color->add_option("--manifest", ctx.manifest, "Manifest path (default OUT.manifest.json)");

  std::string eval_in;
  auto* eval = app.add_subcommand("eval", "Evaluate the discrepancy of a coloring file");
  eval->add_option("file,--in", eval_in, "Coloring file")->required();

  std::string bounds_shape;
  bool bounds_csv = false;
  double c_upper = 1.0;
  auto* bounds = app.add_subcommand("bounds", "Lower and upper bound values for a shape");
  bounds->add_option("--shape", bounds_shape, "Extents")->required();
  bounds->add_flag("--csv", bounds_csv, "Emit CSV instead of a table");
  bounds->add_option("--upper-constant", c_upper, "Constant for the upper-bound form");

  std::string suite = "all", verify_out;
  int trials = 100;
  auto* verify = app.add_subcommand("verify", "Check bound inequalities on randomized suites");
  verify->add_option("--suite", suite, "counting | lattice | fourier | all");
  verify->add_option("--trials", trials, "Random instances per check family");
  verify->add_option("--seed", ctx.seed, "RNG seed");
  verify->add_option("--out", verify_out, "CSV file (stdout when omitted)");
  verify->add_option("--manifest", ctx.manifest, "Manifest path");

  SweepOpts so;
  auto* sweep = app.add_subcommand("sweep", "Color a ladder of shapes and record discrepancy");
  sweep->add_option("--d", so.d, "Dimension; single extents N expand to N^d");
  sweep->add_option("--shapes", so.shapes, "Shapes, e.g. 64 128 256 or 8x8")->delimiter(';');
  sweep->add_option("--reps", so.reps, "Seeds per shape");
  sweep->add_option("--seed", ctx.seed, "First seed");
  sweep->add_option("--method", so.method, "partial-coloring | random | exact");
  sweep->add_option("--polish-sweeps", so.polish_sweeps, "Local-search flips per cell");
  sweep->add_flag("--no-timing", so.no_timing, "Write 0 for runtime_ms");
  sweep->add_flag("--fit", so.fit, "Fit the log-log slope of disc against the longest side");
  sweep->add_option("--out", so.out, "CSV file (stdout when omitted)");
  sweep->add_option("--manifest", ctx.manifest, "Manifest path");

  std::string lll_in, lll_out, lll_delta = "3/4";
  auto* lll = app.add_subcommand("lll", "LLL-reduce an integer basis file");
  lll->add_option("file,--in", lll_in, "Basis file: 'k n' then k rows")->required();
  lll->add_option("--out", lll_out, "Output basis file (stdout when omitted)");
  lll->add_option("--delta", lll_delta, "Lovasz parameter as p/q");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    int code = kExitOk;
    if (*color) {
      ctx.subcommand = "color";
      code = cmd_color(ctx, co, out, err);
    } else if (*eval) {
      ctx.subcommand = "eval";
      code = cmd_eval(ctx, eval_in, out);
    } else if (*bounds) {
      ctx.subcommand = "bounds";
      code = cmd_bounds(ctx, bounds_shape, bounds_csv, c_upper, out);
    } else if (*verify) {
      ctx.subcommand = "verify";
      code = cmd_verify(ctx, suite, trials, verify_out, out, err);
    } else if (*sweep) {
      ctx.subcommand = "sweep";
      code = cmd_sweep(ctx, so, out, err);
    } else if (*lll) {
      ctx.subcommand = "lll";
      code = cmd_lll(ctx, lll_in, lll_out, lll_delta, out);
    }
    ctx.finish();
    return code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolveError& e) {
    err << "solve failed: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace apdisc
