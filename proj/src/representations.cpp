#include "onlat/representations.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace onlat {

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace

// ---------------- Edwards-Sokal

int FkState::num_open() const { return (int)std::count(open.begin(), open.end(), 1); }

int fk_cluster_count(const Graph& g, const std::vector<char>& open, std::vector<int>* label) {
  if ((int)open.size() != g.ne()) throw std::invalid_argument("bond vector does not match the graph");
  Dsu u(g.nv);
  int n = g.nv;
  for (int e = 0; e < g.ne(); ++e)
    if (open[e] && u.unite(g.edges[e].first, g.edges[e].second)) --n;
  if (label) {
    label->resize(g.nv);
    for (int v = 0; v < g.nv; ++v) (*label)[v] = u.find(v);
  }
  return n;
}

double fk_log_weight(const Graph& g, const FkState& s) {
  int k = s.num_open();
  double w = s.clusters * std::log(s.q);
  if (k) w += k * std::log(s.p);
  if (g.ne() - k) w += (g.ne() - k) * std::log1p(-s.p);
  return w;
}

EdwardsSokalChain::EdwardsSokalChain(const Graph& g, double beta, std::uint64_t seed, std::uint64_t stream)
    : g_(&g), beta_(beta), rng_(seed, stream) {
  if (!(beta >= 0)) throw std::invalid_argument("beta must be >= 0");
  fk_.p = fk_p(beta);
  fk_.q = 2;
  fk_.open.assign(g.ne(), 0);
  spin_.resize(g.nv);
  for (auto& s : spin_) s = rng_.coin() ? 1 : -1;
  fk_.clusters = fk_cluster_count(g, fk_.open, &label_);
}

void EdwardsSokalChain::step() {
  const Graph& g = *g_;
  for (int e = 0; e < g.ne(); ++e) {
    auto [a, b] = g.edges[e];
    fk_.open[e] = spin_[a] == spin_[b] && rng_.uniform() < fk_.p;
  }
  fk_.clusters = fk_cluster_count(g, fk_.open, &label_);
  std::vector<int> sign(g.nv, 0);
  for (int v = 0; v < g.nv; ++v) {
    int r = label_[v];
    if (!sign[r]) sign[r] = rng_.coin() ? 1 : -1;
    spin_[v] = sign[r];
  }
}

EsSample edwards_sokal_sample(const Graph& g, double beta, Rng& rng, int steps) {
  EdwardsSokalChain c(g, beta, rng.next());
  for (int i = 0; i < std::max(1, steps); ++i) c.step();
  return {c.fk(), c.spins()};
}

// ---------------- Fourier weights

double fourier_weight(FourierModel m, double beta, int k) {
  if (!(beta > 0) && !(m == FourierModel::XY && beta == 0)) throw std::invalid_argument("beta must be > 0");
  k = std::abs(k);
  if (m == FourierModel::Villain) return std::sqrt(2 * M_PI / beta) * std::exp(-2 * M_PI * M_PI * k * k / beta);
  if (beta == 0) return k == 0 ? 1.0 : 0.0;
  // sum_m (beta/2)^{k+2m} / (m! (m+k)!)
  const double h = beta / 2, h2 = h * h;
  double term = std::exp(k * std::log(h) - std::lgamma(k + 1.0));
  double sum = 0;
  const int cap = 100000;
  for (int i = 0; i < cap; ++i) {
    sum += term;
    double next = term * h2 / ((i + 1.0) * (i + 1.0 + k));
    // terms decrease once (i+1)(i+1+k) > h^2; stop when the tail is negligible
    if (next < term && next <= 1e-17 * sum) return sum;
    term = next;
    if (!std::isfinite(sum)) break;
  }
  std::ostringstream os;
  os << "Bessel series did not converge: beta=" << beta << " k=" << k << " after " << cap << " terms, partial=" << sum;
  throw std::runtime_error(os.str());
}

double periodic_weight(FourierModel m, double beta, double t) {
  if (m == FourierModel::XY) return std::exp(beta * std::cos(2 * M_PI * t));
  if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
  t -= std::floor(t);
  // terms exp(-beta (t+k)^2/2); |t+k| beyond sqrt(80/beta) is below e^-40
  int K = (int)std::ceil(std::sqrt(80.0 / beta)) + 1;
  if (K > 100000) throw std::runtime_error("periodized Gaussian needs too many terms");
  double s = 0;
  for (int k = -K - 1; k <= K; ++k) s += std::exp(-beta * (t + k) * (t + k) / 2);
  return s;
}

// ---------------- planar graphs

PlanarGraph planar_single_edge() {
  PlanarGraph G;
  G.g = Graph(2);
  G.g.add_edge(0, 1);
  G.faces.push_back({0, 0});
  G.nfaces = 1;
  return G;
}

PlanarGraph planar_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  PlanarGraph G;
  G.g = Graph(n);
  for (int i = 0; i < n; ++i) {
    G.g.add_edge(i, (i + 1) % n);
    G.faces.push_back({1, 0});
  }
  // add_edge may store (v,u) with u<v; fix orientation to follow the stored pair
  for (int e = 0; e < n; ++e) {
    auto [a, b] = G.g.edges[e];
    if (!(b == (a + 1) % n)) G.faces[e] = {0, 1};
  }
  G.nfaces = 2;
  return G;
}

PlanarGraph planar_grid(int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("grid needs positive size");
  PlanarGraph G;
  G.g = Graph(w * h);
  auto face = [&](int i, int j) { return (i < 0 || j < 0 || i >= w - 1 || j >= h - 1) ? 0 : 1 + i + j * (w - 1); };
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      int v = i + j * w;
      if (i + 1 < w) {
        // (i,j) -> (i+1,j): face above on the left
        int e = G.g.add_edge(v, v + 1);
        std::array<int, 2> lr = {face(i, j), face(i, j - 1)};
        if (G.g.edges[e].first != v) std::swap(lr[0], lr[1]);
        G.faces.push_back(lr);
      }
      if (j + 1 < h) {
        // (i,j) -> (i,j+1): face to the west on the left
        int e = G.g.add_edge(v, v + w);
        std::array<int, 2> lr = {face(i - 1, j), face(i, j)};
        if (G.g.edges[e].first != v) std::swap(lr[0], lr[1]);
        G.faces.push_back(lr);
      }
    }
  G.nfaces = w > 1 && h > 1 ? 1 + (w - 1) * (h - 1) : 1;
  return G;
}

bool is_flow(const PlanarGraph& G, const Flow& k) {
  if ((int)k.size() != G.g.ne()) return false;
  std::vector<long> div(G.g.nv, 0);
  for (int e = 0; e < G.g.ne(); ++e) {
    div[G.g.edges[e].first] += k[e];
    div[G.g.edges[e].second] -= k[e];
  }
  return std::all_of(div.begin(), div.end(), [](long x) { return x == 0; });
}

Flow height_to_flow(const PlanarGraph& G, const Height& f) {
  if ((int)f.size() != G.nfaces) throw std::invalid_argument("height has the wrong number of faces");
  if (f[0] != 0) throw std::invalid_argument("height must vanish on the outer face");
  Flow k(G.g.ne());
  for (int e = 0; e < G.g.ne(); ++e) k[e] = f[G.faces[e][0]] - f[G.faces[e][1]];
  return k;
}

Height flow_to_height(const PlanarGraph& G, const Flow& k) {
  if ((int)k.size() != G.g.ne()) throw std::invalid_argument("flow has the wrong number of edges");
  if (!is_flow(G, k)) throw std::invalid_argument("input is not a flow (nonzero divergence)");
  std::vector<std::vector<std::pair<int, int>>> dual(G.nfaces);  // (face, edge)
  for (int e = 0; e < G.g.ne(); ++e) {
    dual[G.faces[e][0]].push_back({G.faces[e][1], e});
    dual[G.faces[e][1]].push_back({G.faces[e][0], e});
  }
  Height f(G.nfaces, 0);
  std::vector<char> seen(G.nfaces, 0);
  std::vector<int> queue = {0};
  seen[0] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (auto [y, e] : dual[x]) {
      // f(left) - f(right) = k_e
      int want = G.faces[e][0] == x ? f[x] - k[e] : f[x] + k[e];
      if (G.faces[e][0] == G.faces[e][1]) {
        if (k[e] != 0) throw std::invalid_argument("nonzero flow on a bridge");
        continue;
      }
      if (!seen[y]) {
        seen[y] = 1;
        f[y] = want;
        queue.push_back(y);
      } else if (f[y] != want) {
        throw std::invalid_argument("flow is inconsistent around a vertex");
      }
    }
  }
  return f;
}

FlowPartition flow_partition(const PlanarGraph& G, FourierModel m, double beta, int K, long max_terms) {
  if (K < 1) throw std::invalid_argument("truncation K must be >= 1");
  const int F = G.nfaces - 1;
  double terms = std::pow(2.0 * K + 1, F);
  if (terms > (double)max_terms) throw std::invalid_argument("graph too large for flow enumeration");
  std::vector<double> gh(4 * K + 1);
  for (int j = -2 * K; j <= 2 * K; ++j) gh[j + 2 * K] = fourier_weight(m, beta, j);
  Height f(G.nfaces, 0);
  for (int i = 1; i < G.nfaces; ++i) f[i] = -K;
  FlowPartition r;
  double zK = 0, zK1 = 0;
  while (true) {
    double w = 1;
    for (int e = 0; e < G.g.ne() && w != 0; ++e) w *= gh[f[G.faces[e][0]] - f[G.faces[e][1]] + 2 * K];
    zK += w;
    bool inner = true;
    for (int i = 1; i < G.nfaces; ++i) inner &= std::abs(f[i]) < K;
    if (inner) zK1 += w;
    ++r.terms;
    int i = 1;
    while (i < G.nfaces && f[i] == K) f[i++] = -K;
    if (i >= G.nfaces) break;
    ++f[i];
  }
  r.Z = zK;
  r.remainder = std::abs(zK - zK1);
  return r;
}

Quadrature angle_quadrature(const Graph& g, FourierModel m, double beta, double tol, int M0, int Mmax) {
  if (g.nv < 1) throw std::invalid_argument("empty graph");
  auto at = [&](int M) {
    std::vector<double> tab(M);
    for (int i = 0; i < M; ++i) tab[i] = periodic_weight(m, beta, (double)i / M);
    std::vector<int> th(g.nv, 0);
    double Z = 0;
    while (true) {
      double w = 1;
      for (auto [a, b] : g.edges) w *= tab[((th[a] - th[b]) % M + M) % M];
      Z += w;
      int i = 1;
      while (i < g.nv && th[i] == M - 1) th[i++] = 0;
      if (i >= g.nv) break;
      ++th[i];
    }
    return Z / std::pow((double)M, g.nv - 1);
  };
  Quadrature q;
  q.M = M0;
  q.Z = at(M0);
  while (q.M < Mmax) {
    double z2 = at(2 * q.M);
    q.M *= 2;
    bool conv = std::abs(z2 - q.Z) <= tol * std::abs(z2);
    q.Z = z2;
    if (conv) {
      q.converged = true;
      break;
    }
  }
  return q;
}

// ---------------- Perron representations

double SpinRepresentation::h_pair(int a, int b) const {
  if (a == b) return 1.0;
  if (!G.has_edge(a, b)) return 0.0;
  return x * std::pow(psi[a] / psi[b], 1.0 / 6.0);
}

double SpinRepresentation::h(int a, int b, int c) const {
  if (a == b && b == c) return 1.0;
  if (a == b) return h_pair(c, a);
  if (a == c) return h_pair(b, a);
  if (b == c) return h_pair(a, b);
  return 0.0;
}

SpinRepresentation perron_representation(const Graph& G, double x) {
  if (G.nv < 1) throw std::invalid_argument("empty spin graph");
  if (!(x > 0)) throw std::invalid_argument("x must be > 0");
  std::vector<char> seen(G.nv, 0);
  std::vector<int> q = {0};
  seen[0] = 1;
  for (size_t i = 0; i < q.size(); ++i)
    for (int y : G.adj[q[i]])
      if (!seen[y]) seen[y] = 1, q.push_back(y);
  if ((int)q.size() != G.nv) throw std::invalid_argument("spin graph is disconnected: no Perron eigenvector");
  SpinRepresentation r;
  r.G = G;
  r.x = x;
  std::vector<double> v(G.nv, 1.0), w(G.nv);
  double lam = 0;
  for (int it = 0; it < 10000000; ++it) {
    // w = (A + I) v
    for (int a = 0; a < G.nv; ++a) {
      w[a] = v[a];
      for (int b : G.adj[a]) w[a] += v[b];
    }
    double mx = *std::max_element(w.begin(), w.end());
    for (auto& t : w) t /= mx;
    v.swap(w);
    // residual of A v = lam v
    double num = 0, den = 0;
    for (int a = 0; a < G.nv; ++a) {
      double av = 0;
      for (int b : G.adj[a]) av += v[b];
      num += av * v[a];
      den += v[a] * v[a];
    }
    lam = num / den;
    double res = 0;
    for (int a = 0; a < G.nv; ++a) {
      double av = 0;
      for (int b : G.adj[a]) av += v[b];
      res = std::max(res, std::abs(av - lam * v[a]));
    }
    if (res < 1e-13) break;
  }
  double mn = *std::min_element(v.begin(), v.end());
  for (auto& t : v) t /= mn;
  r.psi = v;
  r.lambda = lam;
  return r;
}

Graph star_graph(int q) {
  Graph g(q + 1);
  for (int i = 1; i <= q; ++i) g.add_edge(0, i);
  return g;
}

SpinRepresentation star_representation(int q, double x) {
  SpinRepresentation r;
  r.G = star_graph(q);
  r.x = x;
  r.psi.assign(q + 1, 1.0);
  r.psi[0] = std::sqrt((double)q);
  r.lambda = std::sqrt((double)q);
  return r;
}

LoopConfig spins_to_loops(const HexDomain& d, const std::vector<int>& spins) {
  const HexWindow& win = d.win();
  if ((int)spins.size() != win.num_hexes()) throw std::invalid_argument("one spin per window hexagon expected");
  LoopConfig w(d);
  for (int e = 0; e < win.num_edges(); ++e) {
    auto& hh = win.edge_hexes(e);
    if (spins[hh[0]] == spins[hh[1]]) continue;
    if (!d.in_edge(e)) throw std::invalid_argument("domain wall outside the domain: boundary condition violated");
    w.set(e, true);
  }
  for (int v : d.vertices())
    if (w.degree(v) % 2) throw std::invalid_argument("three distinct spins around a vertex");
  return w;
}

double spin_weight(const SpinRepresentation& r, const HexDomain& d, const std::vector<int>& spins) {
  const HexWindow& win = d.win();
  double w = 1;
  for (int v = 0; v < win.num_vertices() && w != 0; ++v) {
    auto& hh = win.vertex_hex_ids(v);
    w *= r.h(spins[hh[0]], spins[hh[1]], spins[hh[2]]);
  }
  return w;
}

double single_loop_sum(const SpinRepresentation& r, int a, int m, int mprime) {
  double s = 0;
  for (int b = 0; b < r.G.nv; ++b)
    if (b != a) s += std::pow(r.h_pair(b, a), m) * std::pow(r.h_pair(a, b), mprime);
  return s;
}

// ---------------- DGFF

namespace {

double torus_lambda(const Torus& t, int idx) {
  double lam = 0;
  for (int j = 0; j < t.d(); ++j) lam += 2 * (1 - std::cos(2 * M_PI * t.offset(idx, j) / t.side()));
  return lam;
}

}  // namespace

std::vector<double> dgff_sample(const Torus& t, double beta, Rng& rng) {
  if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
  const int N = t.size();
  std::vector<std::complex<double>> buf(N);
  for (auto& z : buf) z = rng.normal();
  std::vector<int> dims(t.d(), t.side());
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan fw = fftw_plan_dft(t.d(), dims.data(), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fw);
  fftw_destroy_plan(fw);
  // the torus index is a mixed-radix number with equal radices, so FFTW's
  // row-major layout only permutes the axes, and lambda_k is symmetric in them
  for (int k = 0; k < N; ++k) {
    double lam = torus_lambda(t, k);
    buf[k] *= lam > 1e-14 ? 1.0 / std::sqrt(beta * lam) : 0.0;
  }
  fftw_plan bw = fftw_plan_dft(t.d(), dims.data(), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(bw);
  fftw_destroy_plan(bw);
  std::vector<double> h(N);
  const int origin = t.index(std::vector<int>(t.d(), 0));
  for (int i = 0; i < N; ++i) h[i] = buf[i].real() / N;
  double h0 = h[origin];
  for (auto& x : h) x -= h0;
  return h;
}

double dgff_variance(const Torus& t, double beta, int v) {
  const int N = t.size();
  const int origin = t.index(std::vector<int>(t.d(), 0));
  double s = 0;
  for (int k = 0; k < N; ++k) {
    double lam = torus_lambda(t, k);
    if (lam < 1e-14) continue;
    double phase = 0;
    for (int j = 0; j < t.d(); ++j)
      phase += 2 * M_PI * t.offset(k, j) * (t.offset(v, j) - t.offset(origin, j)) / t.side();
    s += (2 - 2 * std::cos(phase)) / lam;
  }
  return s / (beta * N);
}

// ---------------- hard hexagons

HardHexagon::HardHexagon(int w, int h, double lambda, std::uint64_t seed, std::uint64_t stream, bool ordered)
    : w_(w), h_(h), lambda_(lambda), rng_(seed, stream) {
  if (w < 3 || h < 3 || w % 3 || h % 3) throw std::invalid_argument("hard-hexagon torus sides must be multiples of 3");
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be > 0");
  occ_.assign(size(), 0);
  if (ordered)
    for (int s = 0; s < size(); ++s)
      if (sublattice(s) == 0) {
        occ_[s] = 1;
        ++count_[0];
        ++total_;
      }
}

std::array<int, 6> HardHexagon::neighbors(int s) const {
  int i = s % w_, j = s / w_;
  auto id = [&](int a, int b) { return ((a % w_ + w_) % w_) + ((b % h_ + h_) % h_) * w_; };
  return {id(i + 1, j), id(i - 1, j), id(i, j + 1), id(i, j - 1), id(i + 1, j - 1), id(i - 1, j + 1)};
}

bool HardHexagon::step() {
  int s = (int)rng_.below(size());
  if (occ_[s]) {
    if (lambda_ >= 1 && rng_.uniform() >= 1 / lambda_) return false;
    occ_[s] = 0;
    --count_[sublattice(s)];
    --total_;
    return true;
  }
  for (int t : neighbors(s))
    if (occ_[t]) return false;
  if (lambda_ < 1 && rng_.uniform() >= lambda_) return false;
  occ_[s] = 1;
  ++count_[sublattice(s)];
  ++total_;
  return true;
}

std::array<double, 3> HardHexagon::densities() const {
  double per = size() / 3.0;
  return {count_[0] / per, count_[1] / per, count_[2] / per};
}

bool HardHexagon::independent() const {
  for (int s = 0; s < size(); ++s)
    if (occ_[s])
      for (int t : neighbors(s))
        if (occ_[t]) return false;
  return true;
}

std::vector<std::array<int, 2>> HardHexagon::occupied_sites() const {
  std::vector<std::array<int, 2>> r;
  for (int s = 0; s < size(); ++s)
    if (occ_[s]) r.push_back({s % w_, s / w_});
  return r;
}

}  // namespace onlat
