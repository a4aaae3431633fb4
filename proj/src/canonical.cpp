#include "apdisc/canonical.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "apdisc/error.hpp"

namespace apdisc {

namespace {

std::vector<Point> sorted_unique(std::span<const Point> X) {
  std::vector<Point> v(X.begin(), X.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void check_direction(std::span<const Coord> b, std::size_t d) {
  if (b.size() != d) throw InputError("direction dimension mismatch");
  if (std::all_of(b.begin(), b.end(), [](Coord c) { return c == 0; }))
    throw InputError("direction must be nonzero");
}

Point to_point(const EmbeddedSet& e, std::int64_t idx) {
  Point p = e.box.point_of(idx);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += e.origin[i] - 1;
  return p;
}

std::vector<Direction> directions_for_length(const GridShape& box, Coord s) {
  return enumerate_directions(box, std::max<Coord>(s, 2));
}

}  // namespace

EmbeddedSet embed(std::span<const Point> X) {
  if (X.empty()) throw InputError("point set is empty");
  const std::size_t d = X[0].size();
  if (d == 0) throw InputError("points need at least one coordinate");
  Point lo = X[0], hi = X[0];
  for (const auto& p : X) {
    if (p.size() != d) throw InputError("points of mixed dimension");
    for (std::size_t i = 0; i < d; ++i) lo[i] = std::min(lo[i], p[i]), hi[i] = std::max(hi[i], p[i]);
  }
  std::vector<Coord> ext(d);
  for (std::size_t i = 0; i < d; ++i) ext[i] = hi[i] - lo[i] + 1;
  EmbeddedSet e{GridShape(ext), lo, {}};
  e.mask.assign(static_cast<std::size_t>(e.box.size()), 0);
  Point q(d);
  for (const auto& p : X) {
    for (std::size_t i = 0; i < d; ++i) q[i] = p[i] - lo[i] + 1;
    e.mask[e.box.index_of(q)] = 1;
  }
  return e;
}

std::vector<std::vector<std::int64_t>> subset_lines(const GridShape& shape,
                                                    const std::vector<char>& mask,
                                                    std::span<const Coord> b) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur;
  for_each_line(shape, b, [&](std::int64_t first, std::int64_t step, Coord len) {
    cur.clear();
    std::int64_t idx = first;
    for (Coord k = 0; k < len; ++k, idx += step)
      if (mask[idx]) cur.push_back(idx);
    if (!cur.empty()) out.push_back(cur);
  });
  return out;
}

std::int64_t f_count(const GridShape& shape, const std::vector<char>& mask, Coord s) {
  if (s < 1 || (s & (s - 1)) != 0) throw InputError("block size must be a power of 2");
  if (s == 1) return std::count(mask.begin(), mask.end(), char{1});
  std::int64_t total = 0;
  for (const auto& b : directions_for_length(shape, s)) {
    for_each_line(shape, b, [&](std::int64_t first, std::int64_t step, Coord len) {
      if (len < s) return;
      std::int64_t cnt = 0, idx = first;
      for (Coord k = 0; k < len; ++k, idx += step) cnt += mask[idx] ? 1 : 0;
      total += cnt / s;
    });
  }
  return total;
}

std::int64_t u_size(const GridShape& shape, const std::vector<char>& mask,
                    std::span<const Coord> b, Coord s) {
  check_direction(b, shape.dim());
  std::int64_t total = 0;
  for_each_line(shape, b, [&](std::int64_t first, std::int64_t step, Coord len) {
    if (len < s) return;
    std::int64_t cnt = 0, idx = first;
    for (Coord k = 0; k < len; ++k, idx += step) cnt += mask[idx] ? 1 : 0;
    if (cnt >= s) total += cnt;
  });
  return total;
}

std::vector<LineOrder> build_lines(std::span<const Point> X, std::span<const Coord> b) {
  auto pts = sorted_unique(X);
  if (pts.empty()) {
    check_direction(b, b.size());
    return {};
  }
  auto e = embed(pts);
  check_direction(b, e.box.dim());
  Direction nb = sign_normalize(b);
  bool flip = !is_sign_normalized(b);
  std::vector<LineOrder> out;
  for (const auto& idxs : subset_lines(e.box, e.mask, nb)) {
    LineOrder line;
    line.direction.assign(b.begin(), b.end());
    for (auto idx : idxs) line.points.push_back(to_point(e, idx));
    line.residue_id = line.points.front();
    if (flip) std::reverse(line.points.begin(), line.points.end());
    out.push_back(std::move(line));
  }
  std::sort(out.begin(), out.end(),
            [](const LineOrder& a, const LineOrder& c) { return a.residue_id < c.residue_id; });
  return out;
}

std::vector<Point> u_set(std::span<const Point> X, std::span<const Coord> b, Coord s) {
  std::vector<Point> out;
  for (auto& line : build_lines(X, b))
    if (static_cast<Coord>(line.points.size()) >= s)
      out.insert(out.end(), line.points.begin(), line.points.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t f_count(std::span<const Point> X, Coord s) {
  if (s < 1 || (s & (s - 1)) != 0) throw InputError("block size must be a power of 2");
  auto pts = sorted_unique(X);
  if (pts.empty()) return 0;
  auto e = embed(pts);
  return f_count(e.box, e.mask, s);
}

std::vector<Point> block_points(const LineOrder& line, const CanonicalSet& block) {
  Coord lo = (block.block_index - 1) * block.size;
  Coord hi = block.block_index * block.size;
  if (block.block_index < 1 || block.size < 1 || hi > static_cast<Coord>(line.points.size()))
    throw InputError("block outside its line");
  return {line.points.begin() + lo, line.points.begin() + hi};
}

std::vector<CanonicalSet> prefix_blocks(const LineOrder& line, Coord j) {
  std::vector<CanonicalSet> out;
  Coord offset = 0;
  for (int t = 62; t >= 0; --t) {
    Coord s = Coord{1} << t;
    if (j & s) {
      out.push_back({line.direction, line.residue_id, offset / s + 1, s});
      offset += s;
    }
  }
  return out;
}

Decomposition decompose(std::span<const Point> X, const APSpec& ap) {
  if (ap.length < 1) throw InputError("AP length must be positive");
  auto pts = sorted_unique(X);
  if (pts.empty()) throw InputError("point set is empty");
  check_direction(ap.diff, pts[0].size());
  if (ap.start.size() != pts[0].size()) throw InputError("AP dimension mismatch");

  std::vector<Point> trace;
  Point p = ap.start;
  for (Coord t = 0; t < ap.length; ++t) {
    if (std::binary_search(pts.begin(), pts.end(), p)) trace.push_back(p);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += ap.diff[i];
  }
  Decomposition out;
  if (trace.empty()) return out;

  for (auto& line : build_lines(pts, ap.diff)) {
    auto it = std::find(line.points.begin(), line.points.end(), trace.front());
    if (it == line.points.end()) continue;
    Coord first = static_cast<Coord>(it - line.points.begin()) + 1;
    Coord last = first + static_cast<Coord>(trace.size()) - 1;
    if (last > static_cast<Coord>(line.points.size()) ||
        !std::equal(trace.begin(), trace.end(), it))
      throw InputError("AP trace is not a contiguous run of its line");
    out.first = first;
    out.last = last;
    out.plus = prefix_blocks(line, last);
    out.minus = prefix_blocks(line, first - 1);
    out.line = std::move(line);
    return out;
  }
  throw InputError("AP trace not found among the lines");
}

std::vector<std::int64_t> block_sum_profile(const PartialColoring& chi,
                                            const std::vector<char>& mask) {
  const GridShape& shape = chi.shape();
  if (static_cast<std::int64_t>(mask.size()) != shape.size())
    throw InputError("mask size does not match grid");
  std::vector<std::int64_t> best(1, 0);
  for (std::int64_t i = 0; i < shape.size(); ++i)
    if (mask[i] && chi.at(i) != 0) best[0] = 1;
  std::vector<std::int64_t> pre;
  for (const auto& b : enumerate_directions(shape, 2)) {
    for (const auto& line : subset_lines(shape, mask, b)) {
      const Coord len = static_cast<Coord>(line.size());
      pre.assign(static_cast<std::size_t>(len) + 1, 0);
      for (Coord k = 0; k < len; ++k) pre[k + 1] = pre[k] + chi.at(line[k]);
      for (std::size_t t = 1; (Coord{1} << t) <= len; ++t) {
        if (best.size() <= t) best.resize(t + 1, 0);
        const Coord s = Coord{1} << t;
        for (Coord j = 0; (j + 1) * s <= len; ++j)
          best[t] = std::max(best[t], std::abs(pre[(j + 1) * s] - pre[j * s]));
      }
    }
  }
  return best;
}

CanonicalFamily::CanonicalFamily(std::vector<Point> X) : X_(sorted_unique(X)) {
  if (X_.empty()) throw InputError("point set is empty");
}

const std::vector<LineOrder>& CanonicalFamily::lines(std::span<const Coord> b) {
  Direction key(b.begin(), b.end());
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, build_lines(X_, b)).first;
  return it->second;
}

std::int64_t CanonicalFamily::f(Coord s) const { return f_count(X_, s); }

void CanonicalFamily::dump(std::ostream& out) {
  auto e = embed(X_);
  for (const auto& b : enumerate_directions(e.box, 2)) {
    for (const auto& line : lines(b)) {
      const Coord len = static_cast<Coord>(line.points.size());
      for (Coord s = 2; s <= len; s *= 2) {
        for (Coord j = 1; j * s <= len; ++j) {
          CanonicalSet set{b, line.residue_id, j, s};
          out << "b=" << format_point(b) << " id=" << format_point(line.residue_id)
              << " j=" << j << " s=" << s << " :";
          for (const auto& p : block_points(line, set)) out << ' ' << format_point(p);
          out << '\n';
        }
      }
    }
  }
}

}  // namespace apdisc
