#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace apdisc {

using Coord = std::int64_t;
using Point = std::vector<Coord>;
using Direction = std::vector<Coord>;

// Box [N_1] x ... x [N_d] with 1-based coordinates, flattened row-major
// (axis 1 varies slowest).
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<Coord> dims);

  std::size_t dim() const { return dims_.size(); }
  Coord extent(std::size_t axis) const { return dims_[axis]; }
  const std::vector<Coord>& dims() const { return dims_; }
  std::int64_t size() const { return size_; }
  std::int64_t stride(std::size_t axis) const { return strides_[axis]; }
  Coord min_extent() const;
  Coord max_extent() const;

  bool contains(std::span<const Coord> p) const;
  std::int64_t index_of(std::span<const Coord> p) const;
  Point point_of(std::int64_t index) const;
  std::int64_t offset_of(std::span<const Coord> b) const;

  std::string to_string() const;  // "4x4"
  bool operator==(const GridShape& o) const { return dims_ == o.dims_; }

 private:
  std::vector<Coord> dims_;
  std::vector<std::int64_t> strides_;
  std::int64_t size_ = 0;
};

// Parses "4,4" or "4x4".
GridShape parse_shape(const std::string& text);

struct APSpec {
  Point start;
  Direction diff;
  Coord length = 0;
};

struct ApPoints {
  std::vector<Point> points;
  bool inside = true;
};

ApPoints ap_points(const APSpec& ap, const GridShape& shape);

// Colors in {-1, 0, +1}; 0 is uncolored.
class PartialColoring {
 public:
  PartialColoring() = default;
  explicit PartialColoring(GridShape shape);
  PartialColoring(GridShape shape, std::vector<std::int8_t> values);

  const GridShape& shape() const { return shape_; }
  const std::vector<std::int8_t>& values() const { return values_; }
  std::vector<std::int8_t>& mutable_values() { return values_; }

  std::int8_t at(std::int64_t index) const { return values_[index]; }
  std::int8_t at(std::span<const Coord> p) const { return values_[shape_.index_of(p)]; }
  void set(std::int64_t index, int value);

  std::int64_t colored_count() const;
  bool is_full() const { return colored_count() == shape_.size(); }
  bool operator==(const PartialColoring& o) const {
    return shape_ == o.shape_ && values_ == o.values_;
  }

 private:
  GridShape shape_;
  std::vector<std::int8_t> values_;
};

std::int64_t chi_sum(const PartialColoring& chi, const APSpec& ap);

struct DiscResult {
  std::int64_t value = 0;
  APSpec witness;
};

using DirectionFilter = std::function<bool(const Direction&)>;

DiscResult disc_eval(const PartialColoring& chi, unsigned threads = 1);
DiscResult disc_eval_where(const PartialColoring& chi, const DirectionFilter& keep,
                           unsigned threads = 1);

bool is_sign_normalized(std::span<const Coord> b);
Direction sign_normalize(std::span<const Coord> b);

// Sign-normalized b != 0 with |b_i| * (min_len - 1) <= N_i - 1, in
// lexicographic order. min_len >= 2.
std::vector<Direction> enumerate_directions(const GridShape& shape, Coord min_len = 2);

// Maximal runs {x, x+b, ...} inside the grid; fn(first_index, index_step, length).
void for_each_line(const GridShape& shape, std::span<const Coord> b,
                   const std::function<void(std::int64_t, std::int64_t, Coord)>& fn);

PartialColoring read_coloring(std::istream& in);
void write_coloring(std::ostream& out, const PartialColoring& chi);
PartialColoring read_coloring_file(const std::string& path);
void write_coloring_file(const std::string& path, const PartialColoring& chi);

std::string format_point(std::span<const Coord> p);
std::string format_witness(const APSpec& ap);

}  // namespace apdisc
