#include "onlat/spin.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace onlat {

SpinConfig::SpinConfig(int n_, int nv_) : n(n_), nv(nv_), v((size_t)n_ * nv_, 0.0) {
  if (n_ < 1) throw std::invalid_argument("n must be >= 1");
  for (int i = 0; i < nv; ++i) at(i)[0] = 1.0;
}

void random_unit(int n, Rng& rng, double* out) {
  if (n == 1) {
    out[0] = rng.coin() ? 1.0 : -1.0;
    return;
  }
  double s;
  do {
    s = 0;
    for (int j = 0; j < n; ++j) {
      out[j] = rng.normal();
      s += out[j] * out[j];
    }
  } while (s < 1e-24);
  s = 1.0 / std::sqrt(s);
  for (int j = 0; j < n; ++j) out[j] *= s;
}

SpinConfig SpinConfig::random(int n, int nv, Rng& rng) {
  SpinConfig c(n, nv);
  for (int i = 0; i < nv; ++i) random_unit(n, rng, c.at(i));
  return c;
}

double SpinConfig::dot(int i, int j) const {
  const double *a = at(i), *b = at(j);
  double s = 0;
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void SpinConfig::normalize(int i) {
  double* a = at(i);
  if (n == 1) {
    a[0] = a[0] < 0 ? -1.0 : 1.0;
    return;
  }
  double s = 0;
  for (int k = 0; k < n; ++k) s += a[k] * a[k];
  s = 1.0 / std::sqrt(s);
  for (int k = 0; k < n; ++k) a[k] *= s;
}

std::vector<double> SpinConfig::angles() const {
  if (n != 2) throw std::invalid_argument("angles need n=2");
  std::vector<double> th(nv);
  for (int i = 0; i < nv; ++i) {
    double t = std::atan2(at(i)[1], at(i)[0]);
    if (t < 0) t += 2 * std::numbers::pi;
    th[i] = t;
  }
  return th;
}

SpinConfig SpinConfig::from_angles(const std::vector<double>& th) {
  SpinConfig c(2, (int)th.size());
  for (int i = 0; i < c.nv; ++i) {
    c.at(i)[0] = std::cos(th[i]);
    c.at(i)[1] = std::sin(th[i]);
  }
  return c;
}

Potential Potential::ferromagnetic(double beta) {
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
  Potential p;
  p.kind = Kind::Ferromagnetic;
  p.beta = beta;
  p.non_increasing = true;
  return p;
}

Potential Potential::antiferromagnetic(double beta) {
  if (beta <= 0) throw std::invalid_argument("beta must be > 0");
  Potential p;
  p.kind = Kind::AntiFerromagnetic;
  p.beta = beta;
  return p;
}

Potential Potential::general(std::function<double(double)> U, bool non_increasing, std::optional<double> r0) {
  Potential p;
  p.kind = Kind::General;
  p.U = std::move(U);
  p.non_increasing = non_increasing;
  p.r0 = r0;
  return p;
}

double Potential::eval(double r) const {
  switch (kind) {
    case Kind::Ferromagnetic:
      return -beta * r;
    case Kind::AntiFerromagnetic:
      return beta * r;
    default:
      return U(r);
  }
}

double energy(const SpinConfig& cfg, const Graph& g, const Potential& pot) {
  if (cfg.nv != g.nv) throw std::invalid_argument("configuration does not match graph");
  double e = 0;
  for (auto [u, v] : g.edges) {
    double r = cfg.dot(u, v);
    if (!pot.allowed(r)) return std::numeric_limits<double>::infinity();
    e += pot.eval(r);
  }
  return e;
}

void CouplingConstants::set(int u, int v, double j) {
  if (j < 0 && !allow_negative) throw std::invalid_argument("negative coupling");
  J[{std::min(u, v), std::max(u, v)}] = j;
}

double CouplingConstants::get(int u, int v) const {
  auto it = J.find({std::min(u, v), std::max(u, v)});
  return it == J.end() ? 0.0 : it->second;
}

// J_uv = -U(a)/2 + U(b)/2 with a = |s1_u||s1_v| + rest, b = -|s1_u||s1_v| + rest
CouplingConstants embedded_ising_couplings(const SpinConfig& cfg, const Graph& g, const Potential& pot) {
  if (cfg.n < 2) throw std::invalid_argument("embedded Ising needs n >= 2");
  CouplingConstants c;
  c.allow_negative = !pot.non_increasing;
  for (auto [u, v] : g.edges) {
    double rest = cfg.dot(u, v) - cfg.at(u)[0] * cfg.at(v)[0];
    double p = std::fabs(cfg.at(u)[0]) * std::fabs(cfg.at(v)[0]);
    double a = p + rest, b = -p + rest;
    bool oka = pot.allowed(a), okb = pot.allowed(b);
    if (!oka && !okb) throw std::domain_error("potential infinite at both arguments");
    double j;
    if (!okb)
      j = std::numeric_limits<double>::infinity();
    else if (!oka)
      j = -std::numeric_limits<double>::infinity();
    else
      j = 0.5 * (pot.eval(b) - pot.eval(a));
    c.set(u, v, j);
  }
  return c;
}

}  // namespace onlat
