#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "onlat/loop.hpp"
#include "onlat/rng.hpp"
#include "onlat/stats.hpp"
#include "onlat/torus.hpp"

namespace onlat {

// ---- Edwards-Sokal / FK (q = 2)
inline double fk_p(double beta) { return -std::expm1(-2 * beta); }

struct FkState {
  std::vector<char> open;  // per graph edge
  int clusters = 0;
  double p = 0, q = 2;
  int num_open() const;
};
// clusters of (V, open); fills label (root per vertex) when given
int fk_cluster_count(const Graph& g, const std::vector<char>& open, std::vector<int>* label = nullptr);
// log of q^N p^|E| (1-p)^{|E(G)|-|E|}
double fk_log_weight(const Graph& g, const FkState& s);

// Alternates bonds given spins (open w.p. p between equal spins) and spins
// given bonds (uniform sign per cluster). Stationary law: the joint coupling.
class EdwardsSokalChain {
 public:
  EdwardsSokalChain(const Graph& g, double beta, std::uint64_t seed, std::uint64_t stream = 0);
  void step();
  const FkState& fk() const { return fk_; }
  const std::vector<int>& spins() const { return spin_; }
  const std::vector<int>& labels() const { return label_; }
  bool connected(int x, int y) const { return label_[x] == label_[y]; }

 private:
  const Graph* g_;
  double beta_;
  Rng rng_;
  FkState fk_;
  std::vector<int> spin_, label_;
};

struct EsSample {
  FkState fk;
  std::vector<int> spins;
};
EsSample edwards_sokal_sample(const Graph& g, double beta, Rng& rng, int steps = 20);

// ---- Fourier coefficients of g(t) = exp(-U(cos 2 pi t))
enum class FourierModel { XY, Villain };
// XY: I_k(beta) by its power series; Villain: sqrt(2pi/beta) exp(-2 pi^2 k^2/beta)
double fourier_weight(FourierModel m, double beta, int k);
// the periodic function itself, t in [0,1)
double periodic_weight(FourierModel m, double beta, double t);

// ---- planar graphs, flows and heights
// Each edge is oriented first->second; left/right are the faces on either
// side of that directed edge. Face 0 is the outer face.
struct PlanarGraph {
  Graph g;
  std::vector<std::array<int, 2>> faces;  // (left, right)
  int nfaces = 1;
};
PlanarGraph planar_single_edge();
PlanarGraph planar_cycle(int n);          // counterclockwise, inner face 1
PlanarGraph planar_grid(int w, int h);    // w x h vertices

using Flow = std::vector<int>;    // k along the stored orientation of each edge
using Height = std::vector<int>;  // per face, outer face = 0

bool is_flow(const PlanarGraph& G, const Flow& k);
Flow height_to_flow(const PlanarGraph& G, const Height& f);
Height flow_to_height(const PlanarGraph& G, const Flow& k);  // throws when k is not a flow

struct FlowPartition {
  double Z = 0;
  double remainder = 0;  // |Z_K - Z_{K-1}|, estimate of the truncation error
  long terms = 0;
};
FlowPartition flow_partition(const PlanarGraph& G, FourierModel m, double beta, int K, long max_terms = 50000000);

// Z = int_{[0,1)^V} prod_edges g(theta_u - theta_v) dtheta on an M-point grid
// (gauge theta_0 = 0); M doubled until the relative change is below tol
struct Quadrature {
  double Z = 0;
  int M = 0;
  bool converged = false;
};
Quadrature angle_quadrature(const Graph& g, FourierModel m, double beta, double tol = 1e-8, int M0 = 8,
                            int Mmax = 512);

// ---- exact spin representations of the loop model
struct SpinRepresentation {
  Graph G;  // on the spin set S = {0..|S|-1}
  std::vector<double> psi;
  double lambda = 0;
  double x = 0;
  double h_pair(int a, int b) const;  // h(a,b,b)
  double h(int a, int b, int c) const;
};
// power iteration on A + I; psi normalised to min component 1
SpinRepresentation perron_representation(const Graph& G, double x);
Graph star_graph(int q);  // centre 0, leaves 1..q
SpinRepresentation star_representation(int q, double x);  // closed form

// spins per window hexagon of d; hexagons outside the interior must hold the
// boundary value. ok = false when the walls are not a loop configuration
LoopConfig spins_to_loops(const HexDomain& d, const std::vector<int>& spins);
double spin_weight(const SpinRepresentation& r, const HexDomain& d, const std::vector<int>& spins);

// sum_b h_{b,a}^m h_{a,b}^{m'} for a single loop with m left and m' right turns
double single_loop_sum(const SpinRepresentation& r, int a, int m, int mprime);

// ---- discrete Gaussian free field on a 2d torus, density exp(-beta/2 sum (h_u-h_v)^2),
// pinned at the origin
std::vector<double> dgff_sample(const Torus& t, double beta, Rng& rng);
double dgff_variance(const Torus& t, double beta, int v);  // Var(h_v), exact

// ---- hard hexagons on a triangular torus patch (axial coordinates)
class HardHexagon {
 public:
  // w, h multiples of 3; ordered = start with sublattice 0 fully occupied
  HardHexagon(int w, int h, double lambda, std::uint64_t seed, std::uint64_t stream = 0, bool ordered = false);
  bool step();  // one insert/delete proposal, returns accepted
  void sweep() {
    for (int i = 0; i < size(); ++i) step();
  }
  int size() const { return w_ * h_; }
  int width() const { return w_; }
  int height() const { return h_; }
  int sublattice(int s) const { return ((2 * (s % w_) + s / w_) % 3); }
  bool occupied(int s) const { return occ_[s]; }
  int occupied_count() const { return total_; }
  std::array<double, 3> densities() const;  // occupied fraction of each sublattice
  std::array<int, 6> neighbors(int s) const;
  bool independent() const;
  std::vector<std::array<int, 2>> occupied_sites() const;

 private:
  int w_, h_;
  double lambda_;
  Rng rng_;
  std::vector<char> occ_;
  std::array<int, 3> count_{0, 0, 0};
  int total_ = 0;
};

}  // namespace onlat
