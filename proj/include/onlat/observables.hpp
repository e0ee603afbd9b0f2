#pragma once
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "onlat/spin.hpp"
#include "onlat/stats.hpp"
#include "onlat/torus.hpp"

namespace onlat {

// ---- correlations
ChainEstimate two_point(const std::vector<SpinConfig>& samples, int x, int y);
// average over all x of <s_x, s_{x+r}> for every displacement r (index = torus vertex of r)
std::vector<double> correlation_function(const SpinConfig& cfg, const Torus& t);
// translation average at a fixed displacement (given as a torus vertex r)
ChainEstimate two_point_averaged(const std::vector<SpinConfig>& samples, const Torus& t, int r);
// rho(r), r=0..L, averaged over the d coordinate axes and translations
std::vector<double> axis_profile(const SpinConfig& cfg, const Torus& t);

// ---- Fourier
double laplacian_eigenvalue(const std::vector<double>& k);
std::vector<double> wavevector(const Torus& t, int m);  // (pi/L) * coords(m)
// sigma-hat^j_k for every k (index as torus vertex of m, k = pi m / L)
std::vector<std::complex<double>> fourier(const SpinConfig& cfg, const Torus& t, int j);
std::vector<std::complex<double>> fourier_direct(const SpinConfig& cfg, const Torus& t, int j);

struct InfraredRow {
  int k = 0;  // torus vertex of m
  int j = 0;
  double mean = 0, std_error = 0, bound = 0, z = 0;
  bool flagged = false;
};

// streaming E|sigma-hat^j_k|^2 with batch-means errors
class InfraredAccumulator {
 public:
  InfraredAccumulator(const Torus& t, int n, int batch_size = 100);
  void add(const SpinConfig& cfg);
  std::vector<InfraredRow> report(double beta, double zmax = 4.0) const;
  long count() const { return count_; }

 private:
  const Torus& t_;
  int n_, bs_;
  long count_ = 0;
  std::vector<double> cur_;                  // running sum in the open batch
  std::vector<std::vector<double>> batches_;  // closed batch means
};

std::vector<InfraredRow> infrared_check(const std::vector<SpinConfig>& samples, const Torus& t, double beta,
                                        double zmax = 4.0);

// W(s+tau)/W(s) with W(tau) = exp(-beta/2 sum_edges |tau_u - tau_v|^2)
double gaussian_domination_ratio(const SpinConfig& cfg, const Graph& g, double beta, const std::vector<double>& tau);
ChainEstimate gaussian_domination_estimate(const std::vector<SpinConfig>& samples, const Graph& g, double beta,
                                           const std::vector<double>& tau);

// ---- vortices (d=2, n=2); plaquette at vertex (x,y) with corners (x,y),(x+1,y),(x+1,y+1),(x,y+1)
// value = (clockwise sum of folded angle differences)/(2 pi); folding into [-pi,pi)
std::vector<int> vortex_field(const SpinConfig& cfg, const Torus& t);

// ---- d-dimensional integral of 1/sum_j (1 - cos(pi t_j)) over [0,1]^d
struct IrIntegral {
  bool divergent = false;
  double value = std::numeric_limits<double>::infinity();
  double coarse = 0, fine = 0;  // midpoint at grid and 2*grid
  int grid = 0;
};
IrIntegral ir_integral(int d, int grid = 128);
// limit grid -> infinity, via int_0^inf (e^{-s} I_0(s))^d ds
double ir_integral_bessel(int d);

// ---- Aizenman crossings
struct CrossingOutcome {
  bool E = false;  // top-bottom crossing of V0 with box adjacency
  bool F = false;  // left-right crossing of the complement, nearest neighbour
};
CrossingOutcome crossing_events(const SpinConfig& cfg, const Torus& t, int ell);

struct AizenmanReport {
  int ell = 0;
  double bound = 0;
  double max_rho = 0, max_rho_err = 0;
  int argmax = 0;  // displacement vertex
  double pE = 0, pF = 0, pEorF = 0;
  long vortices = 0;
  long samples = 0;
};
AizenmanReport aizenman_crossing_experiment(const std::vector<SpinConfig>& samples, const Torus& t, int ell);

}  // namespace onlat
