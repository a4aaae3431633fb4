#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "apdisc/grid.hpp"

namespace apdisc {

// One congruence class of X modulo b, ordered by <x, b>.
struct LineOrder {
  Direction direction;
  Point residue_id;  // lexicographically smallest point of the class
  std::vector<Point> points;
};

// Block j (1-based) of size s of a line: positions (j-1)s+1 .. js.
struct CanonicalSet {
  Direction direction;
  Point residue_id;
  Coord block_index = 0;
  Coord size = 0;
};

std::vector<LineOrder> build_lines(std::span<const Point> X, std::span<const Coord> b);
std::vector<Point> u_set(std::span<const Point> X, std::span<const Coord> b, Coord s);
std::int64_t f_count(std::span<const Point> X, Coord s);
std::vector<Point> block_points(const LineOrder& line, const CanonicalSet& block);

// A ∩ X = positions first..last of `line`, written as (plus blocks) minus
// (minus blocks); minus blocks cover a prefix of the plus blocks' union.
struct Decomposition {
  LineOrder line;
  Coord first = 0;  // 1-based, 0 when the trace is empty
  Coord last = 0;
  std::vector<CanonicalSet> plus;
  std::vector<CanonicalSet> minus;
};

Decomposition decompose(std::span<const Point> X, const APSpec& ap);

// Blocks covering positions 1..j of a line, largest first.
std::vector<CanonicalSet> prefix_blocks(const LineOrder& line, Coord j);

// Grid-embedded forms: X given as a cell mask over `shape`.
std::vector<std::vector<std::int64_t>> subset_lines(const GridShape& shape,
                                                    const std::vector<char>& mask,
                                                    std::span<const Coord> b);
std::int64_t f_count(const GridShape& shape, const std::vector<char>& mask, Coord s);
std::int64_t u_size(const GridShape& shape, const std::vector<char>& mask,
                    std::span<const Coord> b, Coord s);

// Entry t: max |chi(S)| over blocks S in C_X of size 2^t.
std::vector<std::int64_t> block_sum_profile(const PartialColoring& chi,
                                            const std::vector<char>& mask);

struct EmbeddedSet {
  GridShape box;
  Point origin;  // box cell (1,..,1) sits at this point
  std::vector<char> mask;
};

EmbeddedSet embed(std::span<const Point> X);

class CanonicalFamily {
 public:
  explicit CanonicalFamily(std::vector<Point> X);

  const std::vector<Point>& points() const { return X_; }
  const std::vector<LineOrder>& lines(std::span<const Coord> b);
  std::int64_t f(Coord s) const;
  // Every block of size >= 2, one line per set:
  // "b=(..) id=(..) j=.. s=.. : (p1) (p2) ...".
  void dump(std::ostream& out);

 private:
  std::vector<Point> X_;
  std::map<Direction, std::vector<LineOrder>> cache_;
};

}  // namespace apdisc
