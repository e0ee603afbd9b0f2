#include "onlat/rng.hpp"

#include <cmath>

namespace onlat {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed;
  std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
  std::uint64_t x = splitmix64(a) ^ (splitmix64(b) * 0xA0761D6478BD642FULL);
  for (auto& s : s_) s = splitmix64(x);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

// Lemire's multiply-and-reject
std::uint64_t Rng::below(std::uint64_t n) {
  unsigned __int128 m = (unsigned __int128)next() * n;
  std::uint64_t l = (std::uint64_t)m;
  if (l < n) {
    std::uint64_t t = (0 - n) % n;
    while (l < t) {
      m = (unsigned __int128)next() * n;
      l = (std::uint64_t)m;
    }
  }
  return (std::uint64_t)(m >> 64);
}

// Marsaglia polar; platform independent unlike std::normal_distribution
double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

}  // namespace onlat
