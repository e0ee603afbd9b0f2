#pragma once
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "onlat/loop.hpp"

namespace onlat {

// trivial loops around every class-c hexagon interior to the domain
LoopConfig ground_state(const HexDomain& d, int c);

struct Cluster {
  int c = 0;
  std::vector<int> hexes;     // class-c window hexagons of the garden (flowers and what they enclose)
  std::vector<int> vertices;  // IntVert(sigma)
  std::vector<int> edges;     // IntEdge(sigma) + sigma*
  Circuit sigma;
};

// clusters of w inside the domain of w (gamma = the domain's circuit)
struct ClusterDecomposition {
  std::array<std::vector<Cluster>, 3> clusters;
  std::vector<int> edge_class;  // per window edge: 0/1/2, or -1 (E-bar or outside)
  std::vector<char> region;     // IntEdge(gamma) + gamma*, per window edge
  std::vector<int> V;           // V(w, gamma)
  std::vector<int> ebar;        // E-bar
  std::vector<int> ebad;        // E-bad
};

// c-flowers grouped by adjacency in the class-c sublattice; the hexagons
// reachable from the window border through non-flowers are "outside"; each
// group touching the outside, together with everything it encloses, is a
// maximal c-garden; it is a cluster unless another class's garden contains it.
ClusterDecomposition find_clusters(const LoopConfig& w);
std::vector<int> boundary_deviation(const LoopConfig& w);  // V(w, gamma)

// R(w) for a type-0 domain
LoopConfig repair(const LoopConfig& w, const ClusterDecomposition& cd);
LoopConfig repair(const LoopConfig& w);

struct RepairReport {
  int V = 0;         // |V(w, gamma)|
  int ebar_on = 0;   // |w cap E-bar|
  int ebar_loops = 0;  // L(w cap E-bar)
  int d_o = 0, d_L = 0;
  bool identities = false;  // both exact identities
  bool bounds = false;      // 0 <= d_o <= |V| and d_L >= |V|/15 + |d_o|/10
  bool valid = false;       // R(w) is a loop configuration of the domain
  bool disjoint = false;    // the three pieces of R(w) are edge-disjoint
  bool partition = false;   // E0,E1,E2,E-bar partition the region
  std::string message;      // first failure, empty when all hold
  bool ok() const { return identities && bounds && valid && disjoint && partition; }
};
RepairReport repair_identities(const LoopConfig& w);

// u's component of H minus B(w) (B = unbounded part of 0-flower vertices plus the exterior),
// as a domain; empty when u is ground-connected to the outside
std::optional<HexDomain> find_breakup(const LoopConfig& w, int u);
// the restriction of w to a subdomain (edges of sub's window)
LoopConfig restrict_to(const LoopConfig& w, const HexDomain& sub);

// x^{d_o} n^{d_L} >= (n min(x^6,1))^{|V|/15}, in log space
struct WeightGain {
  bool holds = false;
  double lhs = 0, rhs = 0;  // logs
};
WeightGain weight_gain_check(const RepairReport& r, double n, double x);
WeightGain weight_gain_check(const LoopConfig& w, double n, double x);

// Pr(E) <= (q/p) Pr(F) for T: E -> F on an explicit finite space
struct MapCountingReport {
  bool hypotheses = false;
  int first_violation = -1;  // element of E where Pr(T e) < p Pr(e), or an f with too many preimages
  double prE = 0, prF = 0, bound = 0;
  bool holds = false;
};
MapCountingReport map_counting_check(const std::vector<double>& prob, const std::vector<int>& E,
                                     const std::vector<int>& F, const std::function<int(int)>& T, double p, double q);

}  // namespace onlat
