#pragma once

#include <cstdint>
#include <string_view>

namespace apdisc {

// Counter-based stream: value k is a SplitMix64 finalizer of (key + k * golden),
// so any (seed, round, purpose) triple yields an independent reproducible sequence.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t round, std::string_view purpose);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  int rademacher() { return (next_u64() >> 63) ? 1 : -1; }
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace apdisc
