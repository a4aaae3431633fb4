#include "apdisc/grid.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "apdisc/error.hpp"

namespace apdisc {

namespace {

constexpr std::int64_t kMaxCells = std::int64_t{1} << 40;

}  // namespace

GridShape::GridShape(std::vector<Coord> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("grid shape needs at least one axis");
  size_ = 1;
  for (Coord n : dims_) {
    if (n < 1) throw InputError("grid extents must be positive");
    if (size_ > kMaxCells / n) throw InputError("grid has too many cells");
    size_ *= n;
  }
  strides_.assign(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * dims_[i];
}

Coord GridShape::min_extent() const { return *std::min_element(dims_.begin(), dims_.end()); }
Coord GridShape::max_extent() const { return *std::max_element(dims_.begin(), dims_.end()); }

bool GridShape::contains(std::span<const Coord> p) const {
  if (p.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < 1 || p[i] > dims_[i]) return false;
  return true;
}

std::int64_t GridShape::index_of(std::span<const Coord> p) const {
  if (!contains(p)) throw InputError("point " + format_point(p) + " outside grid " + to_string());
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < p.size(); ++i) idx += (p[i] - 1) * strides_[i];
  return idx;
}

Point GridShape::point_of(std::int64_t index) const {
  Point p(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    p[i] = index / strides_[i] + 1;
    index %= strides_[i];
  }
  return p;
}

std::int64_t GridShape::offset_of(std::span<const Coord> b) const {
  std::int64_t off = 0;
  for (std::size_t i = 0; i < b.size(); ++i) off += b[i] * strides_[i];
  return off;
}

std::string GridShape::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims_[i]);
  }
  return s;
}

GridShape parse_shape(const std::string& text) {
  std::vector<Coord> dims;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw InputError("bad shape '" + text + "'");
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(cur, &used);
    } catch (const std::exception&) {
      throw InputError("bad shape '" + text + "'");
    }
    if (used != cur.size()) throw InputError("bad shape '" + text + "'");
    dims.push_back(v);
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == 'x')
      flush();
    else
      cur += c;
  }
  flush();
  return GridShape(std::move(dims));
}

ApPoints ap_points(const APSpec& ap, const GridShape& shape) {
  const std::size_t d = shape.dim();
  if (ap.start.size() != d || ap.diff.size() != d) throw InputError("AP dimension mismatch");
  if (ap.length < 1) throw InputError("AP length must be positive");
  if (std::all_of(ap.diff.begin(), ap.diff.end(), [](Coord c) { return c == 0; }))
    throw InputError("AP difference must be nonzero");
  ApPoints out;
  Point p = ap.start;
  for (Coord t = 0; t < ap.length; ++t) {
    if (!shape.contains(p)) out.inside = false;
    out.points.push_back(p);
    for (std::size_t i = 0; i < d; ++i) p[i] += ap.diff[i];
  }
  return out;
}

PartialColoring::PartialColoring(GridShape shape)
    : shape_(std::move(shape)), values_(static_cast<std::size_t>(shape_.size()), 0) {}

PartialColoring::PartialColoring(GridShape shape, std::vector<std::int8_t> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != shape_.size())
    throw InputError("coloring size does not match grid");
  for (auto v : values_)
    if (v < -1 || v > 1) throw InputError("coloring values must be in {-1,0,1}");
}

void PartialColoring::set(std::int64_t index, int value) {
  if (value < -1 || value > 1) throw InputError("coloring values must be in {-1,0,1}");
  values_[index] = static_cast<std::int8_t>(value);
}

std::int64_t PartialColoring::colored_count() const {
  return std::count_if(values_.begin(), values_.end(), [](std::int8_t v) { return v != 0; });
}

std::int64_t chi_sum(const PartialColoring& chi, const APSpec& ap) {
  auto pts = ap_points(ap, chi.shape());
  if (!pts.inside) throw InputError("AP leaves the grid");
  std::int64_t s = 0;
  for (const auto& p : pts.points) s += chi.at(p);
  return s;
}

bool is_sign_normalized(std::span<const Coord> b) {
  for (Coord c : b)
    if (c != 0) return c > 0;
  return false;
}

Direction sign_normalize(std::span<const Coord> b) {
  Direction out(b.begin(), b.end());
  if (!is_sign_normalized(b))
    for (auto& c : out) c = -c;
  return out;
}

std::vector<Direction> enumerate_directions(const GridShape& shape, Coord min_len) {
  if (min_len < 2) throw InputError("direction enumeration needs min_len >= 2");
  const std::size_t d = shape.dim();
  std::vector<Coord> lim(d);
  for (std::size_t i = 0; i < d; ++i) lim[i] = (shape.extent(i) - 1) / (min_len - 1);
  std::vector<Direction> out;
  Direction b(d);
  for (std::size_t i = 0; i < d; ++i) b[i] = -lim[i];
  while (true) {
    if (is_sign_normalized(b)) out.push_back(b);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (b[i] < lim[i]) {
        ++b[i];
        break;
      }
      b[i] = -lim[i];
      if (i == 0) return out;
    }
  }
}

void for_each_line(const GridShape& shape, std::span<const Coord> b,
                   const std::function<void(std::int64_t, std::int64_t, Coord)>& fn) {
  const std::size_t d = shape.dim();
  const std::int64_t step = shape.offset_of(b);
  Point x(d, 1);
  for (std::int64_t idx = 0; idx < shape.size(); ++idx) {
    bool start = false;
    Coord len = std::numeric_limits<Coord>::max();
    for (std::size_t i = 0; i < d; ++i) {
      if (b[i] == 0) continue;
      Coord prev = x[i] - b[i];
      if (prev < 1 || prev > shape.extent(i)) start = true;
      Coord room = b[i] > 0 ? (shape.extent(i) - x[i]) / b[i] : (x[i] - 1) / (-b[i]);
      len = std::min(len, room + 1);
    }
    if (start) fn(idx, step, len);
    for (std::size_t i = d; i-- > 0;) {
      if (++x[i] <= shape.extent(i)) break;
      x[i] = 1;
    }
  }
}

namespace {

struct Best {
  std::int64_t value = -1;
  std::size_t ordinal = 0;
  std::int64_t first = 0;
  std::int64_t step = 0;
  Coord length = 0;
  Direction diff;
};

void scan_direction(const PartialColoring& chi, const Direction& b, std::size_t ordinal,
                    Best& best) {
  const auto& v = chi.values();
  for_each_line(chi.shape(), b, [&](std::int64_t first, std::int64_t step, Coord len) {
    std::int64_t pre = 0, lo = 0, hi = 0;
    Coord lo_at = 0, hi_at = 0;
    std::int64_t idx = first;
    for (Coord k = 1; k <= len; ++k, idx += step) {
      pre += v[idx];
      if (pre < lo) lo = pre, lo_at = k;
      if (pre > hi) hi = pre, hi_at = k;
    }
    if (hi - lo > best.value) {
      Coord a = std::min(lo_at, hi_at), e = std::max(lo_at, hi_at);
      best.value = hi - lo;
      best.ordinal = ordinal;
      best.first = first + a * step;
      best.step = step;
      best.length = e - a;
      best.diff = b;
    }
  });
}

}  // namespace

DiscResult disc_eval_where(const PartialColoring& chi, const DirectionFilter& keep,
                           unsigned threads) {
  const GridShape& shape = chi.shape();
  std::vector<Direction> dirs;
  for (auto& b : enumerate_directions(shape, 2))
    if (!keep || keep(b)) dirs.push_back(std::move(b));

  // Singletons: covers grids (or filters) with no admissible direction.
  Best best;
  best.value = 0;
  best.diff = Direction(shape.dim(), 0);
  best.diff[0] = 1;
  best.length = 1;
  for (std::int64_t i = 0; i < shape.size(); ++i) {
    if (chi.at(i) != 0) {
      best.value = 1;
      best.first = i;
      break;
    }
  }
  Best singles = best;
  best.value = -1;

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(dirs.size())));
  std::vector<Best> partial(threads);
  auto work = [&](unsigned t) {
    for (std::size_t k = t; k < dirs.size(); k += threads) scan_direction(chi, dirs[k], k, partial[t]);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& p : partial)
    if (p.value > best.value || (p.value == best.value && p.ordinal < best.ordinal)) best = p;
  if (best.value <= singles.value || best.length == 0) best = singles;

  DiscResult out;
  out.value = best.value;
  out.witness.start = shape.point_of(best.first);
  out.witness.diff = best.diff;
  out.witness.length = best.length;
  return out;
}

DiscResult disc_eval(const PartialColoring& chi, unsigned threads) {
  return disc_eval_where(chi, nullptr, threads);
}

PartialColoring read_coloring(std::istream& in) {
  auto fail = [](const std::string& why) { throw InputError("coloring file: " + why); };
  std::string line;
  if (!std::getline(in, line)) fail("missing dimension line");
  std::istringstream l1(line);
  long long d = 0;
  std::string extra;
  if (!(l1 >> d) || (l1 >> extra) || d < 1) fail("bad dimension line");
  if (!std::getline(in, line)) fail("missing shape line");
  std::istringstream l2(line);
  std::vector<Coord> dims;
  long long n = 0;
  while (l2 >> n) dims.push_back(n);
  if (!l2.eof() || static_cast<long long>(dims.size()) != d) fail("bad shape line");
  GridShape shape(dims);
  std::vector<std::int8_t> values;
  values.reserve(static_cast<std::size_t>(shape.size()));
  std::string tok;
  while (in >> tok) {
    if (tok == "1")
      values.push_back(1);
    else if (tok == "-1")
      values.push_back(-1);
    else if (tok == "0")
      values.push_back(0);
    else
      fail("unexpected token '" + tok + "'");
  }
  if (static_cast<std::int64_t>(values.size()) != shape.size())
    fail("expected " + std::to_string(shape.size()) + " entries, got " +
         std::to_string(values.size()));
  return PartialColoring(shape, std::move(values));
}

void write_coloring(std::ostream& out, const PartialColoring& chi) {
  const auto& shape = chi.shape();
  out << shape.dim() << '\n';
  for (std::size_t i = 0; i < shape.dim(); ++i) out << (i ? " " : "") << shape.extent(i);
  out << '\n';
  const Coord row = shape.extent(shape.dim() - 1);
  for (std::int64_t i = 0; i < shape.size(); ++i) {
    out << static_cast<int>(chi.at(i));
    out << ((i + 1) % row == 0 ? '\n' : ' ');
  }
}

PartialColoring read_coloring_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_coloring(in);
}

void write_coloring_file(const std::string& path, const PartialColoring& chi) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_coloring(out, chi);
  if (!out) throw InputError("write failed for " + path);
}

std::string format_point(std::span<const Coord> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[i]);
  }
  return s + ")";
}

std::string format_witness(const APSpec& ap) {
  return "a=" + format_point(ap.start) + " b=" + format_point(ap.diff) +
         " l=" + std::to_string(ap.length);
}

}  // namespace apdisc
