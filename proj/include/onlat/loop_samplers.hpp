#pragma once
#include <cstdint>
#include <vector>

#include "onlat/loop.hpp"
#include "onlat/rng.hpp"

namespace onlat {

struct DeltaCounts {
  int d_o = 0;
  int d_L = 0;
};

// change in (o, L) when w is replaced by w xor (edges of interior hexagon h).
// Only the loops through h are retraced.
DeltaCounts delta_counts(const LoopConfig& w, int h);

struct FlipResult {
  int hex = -1;
  bool accepted = false;
  DeltaCounts delta;
};

// One Metropolis face flip at a uniformly chosen interior hexagon of the domain.
// x may be +inf: then only moves with d_o >= 0 are accepted.
FlipResult face_flip_step(LoopConfig& w, double n, double x, Rng& rng);

// Tracks L along a chain of face flips.
class LoopChain {
 public:
  LoopChain(const HexDomain& d, double n, double x, std::uint64_t seed, std::uint64_t stream = 0);
  LoopChain(LoopConfig start, double n, double x, std::uint64_t seed, std::uint64_t stream = 0);
  FlipResult step() {
    auto r = face_flip_step(w_, n_, x_, rng_);
    if (r.accepted) L_ += r.delta.d_L;
    ++steps_;
    if (r.accepted) ++accepted_;
    return r;
  }
  void run(long steps) {
    for (long i = 0; i < steps; ++i) step();
  }
  const LoopConfig& state() const { return w_; }
  int L() const { return L_; }
  long steps() const { return steps_; }
  long accepted() const { return accepted_; }
  Rng& rng() { return rng_; }

 private:
  LoopConfig w_;
  double n_, x_;
  Rng rng_;
  int L_ = 0;
  long steps_ = 0, accepted_ = 0;
};

// n = 1: heat-bath dynamics of +-1 spins on the interior hexagons with every
// hexagon of the enclosing circuit fixed to +1; the domain walls have the law
// of the loop O(1) model with x = exp(-2 beta).
class IsingInterfaceSampler {
 public:
  IsingInterfaceSampler(const HexDomain& d, double x, std::uint64_t seed, std::uint64_t stream = 0);
  void sweep();
  LoopConfig interfaces() const;
  LoopConfig sample(int sweeps) {
    for (int i = 0; i < sweeps; ++i) sweep();
    return interfaces();
  }
  const std::vector<int>& spins() const { return spin_; }  // by window hexagon, 0 outside

 private:
  const HexDomain* dom_;
  double x_;
  Rng rng_;
  std::vector<int> spin_;
  std::vector<int> free_;
};

// convenience: a fresh chain run for `sweeps` sweeps
LoopConfig ising_interface_sample(const HexDomain& d, double x, Rng& rng, int sweeps = 50);

}  // namespace onlat
