#pragma once
#include <cstdint>
#include <vector>

#include "onlat/hex.hpp"

namespace onlat {

// s_k for k = 0..k_max, walks on the hexagonal lattice from one vertex.
// 64-bit counts: s_30 is about 1e8, far from overflow.
struct SawCountTable {
  std::vector<std::uint64_t> s;
  int k_max() const { return (int)s.size() - 1; }
};

// origin = 0,1,2 picks one of three vertices (both sublattices);
// mirrored reflects the lattice before walking; reduced uses the 3-fold
// symmetry of the first step
SawCountTable enumerate_saw(int k_max, int origin = 0, bool mirrored = false, bool reduced = true);

struct ConnectiveEstimates {
  std::vector<double> root;     // s_k^{1/k}, k >= 1 (index k)
  std::vector<double> running;  // inf_{j <= k} s_j^{1/j}
  double upper = 0;             // inf over the table
  double gap = 0;               // upper - sqrt(2+sqrt2)
};
ConnectiveEstimates connective_estimates(const SawCountTable& t);

// walks inside H from the inner end of boundary edge e1 to the inner end of
// e2 (window edge ids from the domain's star), counted by length up to k_max
struct SawPartition {
  std::vector<std::uint64_t> counts;
  double Z = 0;
};
SawPartition saw_two_edge_partition(const HexDomain& d, double x, int e1, int e2, int k_max);

}  // namespace onlat
