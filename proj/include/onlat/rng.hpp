#pragma once
#include <cstdint>
#include <limits>

namespace onlat {

// xoshiro256** seeded through splitmix64 from (seed, stream).
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kName = "xoshiro256**/splitmix64";

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t next();
  result_type operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // [0,1) with 53 bits
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  // (0,1]
  double uniform_pos() { return ((next() >> 11) + 1) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n);
  double normal();
  bool coin() { return next() >> 63; }

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& x);

}  // namespace onlat
