#pragma once
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "onlat/rng.hpp"
#include "onlat/torus.hpp"

namespace onlat {

struct SpinConfig {
  int n = 1;
  int nv = 0;
  std::vector<double> v;  // nv*n, row per vertex

  SpinConfig() = default;
  SpinConfig(int n_, int nv_);  // all spins along e_1
  static SpinConfig random(int n, int nv, Rng& rng);

  double* at(int i) { return v.data() + (size_t)i * n; }
  const double* at(int i) const { return v.data() + (size_t)i * n; }
  double dot(int i, int j) const;
  void normalize(int i);
  std::vector<double> angles() const;  // n=2 only, in [0,2pi)
  static SpinConfig from_angles(const std::vector<double>& th);
};

void random_unit(int n, Rng& rng, double* out);

struct Potential {
  enum class Kind { Ferromagnetic, AntiFerromagnetic, General };
  Kind kind = Kind::Ferromagnetic;
  double beta = 0.0;
  std::function<double(double)> U;  // General only
  bool non_increasing = false;
  std::optional<double> r0;  // hard support threshold

  static Potential ferromagnetic(double beta);
  static Potential antiferromagnetic(double beta);
  static Potential general(std::function<double(double)> U, bool non_increasing, std::optional<double> r0 = {});

  bool allowed(double r) const { return !r0 || r >= *r0; }
  // only for allowed r
  double eval(double r) const;
};

// Sum of U over edges; +inf when a hard constraint is broken.
double energy(const SpinConfig& cfg, const Graph& g, const Potential& pot);

struct CouplingConstants {
  std::map<std::pair<int, int>, double> J;
  bool allow_negative = false;
  void set(int u, int v, double j);
  double get(int u, int v) const;
};

CouplingConstants embedded_ising_couplings(const SpinConfig& cfg, const Graph& g, const Potential& pot);

}  // namespace onlat
