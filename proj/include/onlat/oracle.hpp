#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "onlat/loop.hpp"
#include "onlat/spin.hpp"
#include "onlat/torus.hpp"

namespace onlat {

// Result of a full enumeration. rho holds nv x nv pair observables
// (spin correlations, or connection probabilities for FK).
struct ExactTable {
  std::string model;
  int nv = 0;
  double logZ = 0;
  std::vector<std::pair<std::uint64_t, double>> states;  // (state id, log weight), when kept
  std::map<std::string, double> obs;
  std::vector<double> rho;
  double Z() const;
  double rho_at(int x, int y) const { return rho[(size_t)x * nv + y]; }
  // E f(state) from the kept states
  double expect(const std::function<double(std::uint64_t)>& f) const;
};

// ---- Ising, weight exp(sum_edges J_e s_u s_v); bit v of the state = (s_v == -1)
ExactTable exact_ising(const Graph& g, double beta, bool keep_states = false);
ExactTable exact_ising(const Graph& g, const std::vector<double>& J, bool keep_states = false);
double ising_moment(const ExactTable& t, std::uint64_t A);  // E prod_{x in A} s_x

// Z(tau)/Z(0) for n = 1 with W = exp(-beta/2 sum |s_u + tau_u - s_v - tau_v|^2)
double ising_gaussian_domination(const Graph& g, double beta, const std::vector<double>& tau);

// ---- n = 2 on an M-point angle grid, gauge theta_0 = 0
struct AngleGrid {
  int M = 0;
  bool converged = false;
  double Z = 0;
  std::vector<double> values;  // expectations of the requested functions
};
using AngleFn = std::function<double(const std::vector<double>&)>;  // angles in radians
AngleGrid angle_expectations(const Graph& g, const Potential& pot, int M, const std::vector<AngleFn>& fns);
// M doubled from M0 until Z and every value move by less than tol (relative for Z)
AngleGrid angle_expectations_converged(const Graph& g, const Potential& pot, const std::vector<AngleFn>& fns,
                                       double tol = 1e-10, int M0 = 8, int Mmax = 256);

// table with rho = E cos(theta_x - theta_y), |V| <= 8
ExactTable exact_xy_quadrature(const Graph& g, const Potential& pot, int M0 = 8, int Mmax = 256,
                               double tol = 1e-10);

// ---- loop and FK
ExactTable exact_loop(const HexDomain& d, double n, double x, int cap = 36);
// rho = Pr(x <-> y); obs: "E_open" mean open edges, "N" mean clusters
ExactTable exact_fk(const Graph& g, double p, double q, int cap = 20);

// ---- n = 1 spin-loop identity on a domain H of the hexagonal lattice
Graph domain_graph(const HexDomain& d, std::vector<int>* vertex_ids = nullptr);  // local ids follow d.vertices()
struct RelationN1 {
  double spin = 0;  // rho_{u,v} on H at beta
  double loop = 0;  // sum_odd x^o / sum_even x^o, x = tanh beta
  double ht_lhs = 0, ht_rhs = 0;  // log Z^spin and log(2^|V| cosh^|E| beta sum_even x^o)
};
RelationN1 relation_check_n1(const HexDomain& d, double beta, int u, int v);

// ---- JSON cache: <dir>/<hash>.json holding {"key":..., "value":...}
std::string content_hash(const std::string& s);
// returns the cached value for key, or computes, stores and returns it;
// values are JSON text
std::string oracle_cached(const std::string& dir, const std::string& key_json,
                          const std::function<std::string()>& compute);

}  // namespace onlat
