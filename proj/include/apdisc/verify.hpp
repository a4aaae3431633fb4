#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "apdisc/grid.hpp"
#include "apdisc/lattice.hpp"

namespace apdisc {

// One checked inequality oracle <= bound. Exact rows fail when it is violated;
// measured rows bound an unknown constant and only report oracle / bound.
struct CheckRow {
  std::string check;
  std::string instance;
  bool exact = true;
  double oracle = 0;
  double bound = 0;
  bool pass = true;
  double implied() const { return bound > 0 ? oracle / bound : (oracle > 0 ? 1e300 : 0); }
};

enum class Suite { Counting, Lattice, Fourier, All };
Suite parse_suite(const std::string& name);

std::vector<CheckRow> run_suite(Suite suite, int trials, std::uint64_t seed);

std::vector<CheckRow> counting_suite(int trials, std::uint64_t seed);
// Every admissible b (both signs) on every shape of dimension d with
// 2 <= N_i <= max_extent; one row per (check, shape) holding the worst case.
std::vector<CheckRow> lattice_suite(const std::vector<int>& dims, Coord max_extent);
std::vector<CheckRow> fourier_suite(int trials, std::uint64_t seed);

// Number of point pairs on which "same image" and "difference parallel to b"
// disagree. Linear in the grid size.
std::int64_t fiber_mismatches(const ProjectionMap& pm);

bool all_pass(const std::vector<CheckRow>& rows);
void write_check_csv(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace apdisc
