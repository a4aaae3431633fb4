#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apdisc/grid.hpp"

namespace apdisc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RVec = std::vector<Rational>;
using IMatrix = std::vector<std::vector<std::int64_t>>;

Rational dot(const RVec& a, const RVec& b);

// k linearly independent rational row vectors in Q^n.
class LatticeBasis {
 public:
  LatticeBasis() = default;
  explicit LatticeBasis(std::vector<RVec> vectors);
  static LatticeBasis from_integers(const IMatrix& rows);

  std::size_t rank() const { return vectors_.size(); }
  std::size_t ambient() const { return vectors_.empty() ? 0 : vectors_[0].size(); }
  const std::vector<RVec>& vectors() const { return vectors_; }
  // det(B B^T) = det(lattice)^2
  Rational gram_determinant() const;
  bool is_integral() const;
  IMatrix to_integers() const;

 private:
  std::vector<RVec> vectors_;
};

struct GramSchmidt {
  std::vector<RVec> ortho;
  std::vector<RVec> mu;
  RVec norms;  // |b*_i|^2
};

GramSchmidt gram_schmidt(const std::vector<RVec>& vectors);

LatticeBasis lll_reduce(const LatticeBasis& basis, const Rational& delta = Rational(3, 4));
bool is_lll_reduced(const LatticeBasis& basis, const Rational& delta = Rational(3, 4));

// Row Hermite normal form of the lattice spanned by integer rows; zero rows dropped.
std::vector<std::vector<BigInt>> hermite_normal_form(std::vector<std::vector<BigInt>> rows);
// HNF after clearing denominators with the lcm; returns (lcm, HNF).
std::pair<BigInt, std::vector<std::vector<BigInt>>> hermite_normal_form(const LatticeBasis& basis);
bool same_lattice(const LatticeBasis& a, const LatticeBasis& b);

// Basis of {r in Z^d : r.b = 0} for primitive b, LLL-reduced, first nonzero entry positive.
IMatrix integer_kernel_basis(std::span<const std::int64_t> b);

struct ProjectionMap {
  GridShape shape;
  Direction source;       // b as given
  Direction primitive;    // b / gcd(b)
  IMatrix M;              // (d-1) x d, rows r_j
  std::vector<std::int64_t> v;
  std::vector<std::int64_t> target;  // N*_j
  Rational lambda;
  // Quasi-orthogonality: prod |r*_j|_2^2 against 2^((d-1)(d-2)/2) |b*|^2 (prod N)^2.
  Rational lll_product_sq;
  Rational lll_bound_sq;
  double lll_ratio_bstar = 0;  // sqrt(product / bound) with |b*|
  double lll_ratio_b = 0;      // same with |b/gcd| in place of |b*|
  Rational volume_ratio;       // prod N*_j / (lambda prod N_i)
};

ProjectionMap projection_map(std::span<const std::int64_t> b, const GridShape& shape);
std::vector<std::int64_t> apply(const ProjectionMap& pm, std::span<const Coord> x);

struct FiberStats {
  std::int64_t images = 0;
  std::int64_t preimages = 0;
  std::int64_t min_count = 0;
  std::int64_t max_count = 0;
  std::int64_t lower = 0;   // s
  Rational upper;           // 2 / lambda
  bool ok = true;
};

FiberStats fiber_counts(const ProjectionMap& pm, std::span<const Point> X, std::int64_t s);

enum class MinkowskiStatus { Found, NotApplicable };

struct MinkowskiResult {
  MinkowskiStatus status = MinkowskiStatus::NotApplicable;
  std::optional<RVec> point;
  Rational volume;     // prod 2 h_i
  Rational threshold;  // 2^n det
};

// Box prod[-h_i, h_i] against a full-rank lattice in Q^n.
MinkowskiResult minkowski_witness(const std::vector<Rational>& half_widths,
                                  const LatticeBasis& lattice,
                                  std::int64_t max_candidates = 50'000'000);

IMatrix read_basis(std::istream& in);
void write_basis(std::ostream& out, const IMatrix& rows);

std::string to_string(const Rational& q);

}  // namespace apdisc
