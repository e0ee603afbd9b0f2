#include "onlat/observables.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace onlat {

using cd = std::complex<double>;

// ---------------------------------------------------------------- FFT

namespace {

struct FftPlan {
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;
  int size = 0;
};

// cached in-place plans; FFTW planning is not thread safe, so one cache per thread
FftPlan& plan_for(int d, int side, int sign) {
  thread_local std::map<std::tuple<int, int, int>, FftPlan> cache;
  auto key = std::make_tuple(d, side, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FftPlan p;
  std::vector<int> dims(d, side);
  p.size = 1;
  for (int j = 0; j < d; ++j) p.size *= side;
  p.buf = fftw_alloc_complex(p.size);
  p.plan = fftw_plan_dft(d, dims.data(), p.buf, p.buf, sign, FFTW_ESTIMATE);
  return cache.emplace(key, p).first->second;
}

// unnormalized; index layout = torus offsets, axis 0 fastest (all axes equal length)
void fft_inplace(std::vector<cd>& a, int d, int side, int sign) {
  FftPlan& p = plan_for(d, side, sign);
  if ((int)a.size() != p.size) throw std::logic_error("fft size");
  for (int i = 0; i < p.size; ++i) {
    p.buf[i][0] = a[i].real();
    p.buf[i][1] = a[i].imag();
  }
  fftw_execute(p.plan);
  for (int i = 0; i < p.size; ++i) a[i] = cd(p.buf[i][0], p.buf[i][1]);
}

double fold(double x) {
  const double tp = 2 * std::numbers::pi;
  return x - tp * std::floor((x + std::numbers::pi) / tp);
}

}  // namespace

// ---------------------------------------------------------------- correlations

ChainEstimate two_point(const std::vector<SpinConfig>& samples, int x, int y) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  std::vector<double> s;
  s.reserve(samples.size());
  for (auto& c : samples) s.push_back(c.dot(x, y));
  return estimate(s);
}

std::vector<double> correlation_function(const SpinConfig& cfg, const Torus& t) {
  int N = t.size();
  std::vector<double> C(N, 0.0);
  std::vector<cd> a(N);
  for (int j = 0; j < cfg.n; ++j) {
    for (int v = 0; v < N; ++v) a[v] = cfg.at(v)[j];
    fft_inplace(a, t.d(), t.side(), FFTW_FORWARD);
    for (auto& z : a) z = std::norm(z);
    fft_inplace(a, t.d(), t.side(), FFTW_BACKWARD);
    for (int r = 0; r < N; ++r) C[r] += a[r].real() / ((double)N * N);
  }
  return C;
}

ChainEstimate two_point_averaged(const std::vector<SpinConfig>& samples, const Torus& t, int r) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  std::vector<double> s;
  for (auto& c : samples) {
    double acc = 0;
    for (int x = 0; x < t.size(); ++x) {
      int y = x;
      for (int j = 0; j < t.d(); ++j) y = t.shifted(y, j, t.offset(r, j));
      acc += c.dot(x, y);
    }
    s.push_back(acc / t.size());
  }
  return estimate(s);
}

std::vector<double> axis_profile(const SpinConfig& cfg, const Torus& t) {
  int L = t.L();
  std::vector<double> rho(L + 1, 0.0);
  for (int r = 0; r <= L; ++r) {
    double acc = 0;
    for (int j = 0; j < t.d(); ++j)
      for (int x = 0; x < t.size(); ++x) acc += cfg.dot(x, t.shifted(x, j, r));
    rho[r] = acc / ((double)t.size() * t.d());
  }
  return rho;
}

// ---------------------------------------------------------------- Fourier

double laplacian_eigenvalue(const std::vector<double>& k) {
  double s = 0;
  for (double kj : k) s += 1.0 - std::cos(kj);
  return 2.0 * s;
}

std::vector<double> wavevector(const Torus& t, int m) {
  std::vector<double> k(t.d());
  for (int j = 0; j < t.d(); ++j) k[j] = std::numbers::pi * t.coord(m, j) / t.L();
  return k;
}

std::vector<cd> fourier(const SpinConfig& cfg, const Torus& t, int j) {
  int N = t.size();
  std::vector<cd> a(N);
  for (int v = 0; v < N; ++v) a[v] = cfg.at(v)[j];
  fft_inplace(a, t.d(), t.side(), FFTW_FORWARD);
  // output slot with offsets o holds frequency m = o (mod 2L); move to coords layout
  // and correct for vertex coordinates starting at -L+1
  std::vector<cd> out(N);
  for (int o = 0; o < N; ++o) {
    std::vector<int> m(t.d());
    double ph = 0;
    for (int q = 0; q < t.d(); ++q) {
      int off = t.offset(o, q);
      int c = off > t.L() ? off - t.side() : off;  // in {-L+1..L}
      m[q] = c;
      ph += std::numbers::pi * c / t.L() * (t.L() - 1);
    }
    out[t.index(m)] = a[o] * std::polar(1.0, ph);
  }
  return out;
}

std::vector<cd> fourier_direct(const SpinConfig& cfg, const Torus& t, int j) {
  int N = t.size();
  std::vector<cd> out(N);
  for (int m = 0; m < N; ++m) {
    auto k = wavevector(t, m);
    cd s = 0;
    for (int v = 0; v < N; ++v) {
      double kv = 0;
      for (int q = 0; q < t.d(); ++q) kv += k[q] * t.coord(v, q);
      s += cfg.at(v)[j] * std::polar(1.0, -kv);
    }
    out[m] = s;
  }
  return out;
}

InfraredAccumulator::InfraredAccumulator(const Torus& t, int n, int batch_size)
    : t_(t), n_(n), bs_(batch_size), cur_((size_t)t.size() * n, 0.0) {}

void InfraredAccumulator::add(const SpinConfig& cfg) {
  int N = t_.size();
  std::vector<cd> a(N);
  for (int j = 0; j < n_; ++j) {
    for (int v = 0; v < N; ++v) a[v] = cfg.at(v)[j];
    fft_inplace(a, t_.d(), t_.side(), FFTW_FORWARD);
    for (int m = 0; m < N; ++m) cur_[(size_t)j * N + m] += std::norm(a[m]);
  }
  if (++count_ % bs_ == 0) {
    for (auto& x : cur_) x /= bs_;
    batches_.push_back(cur_);
    std::fill(cur_.begin(), cur_.end(), 0.0);
  }
}

std::vector<InfraredRow> InfraredAccumulator::report(double beta, double zmax) const {
  if (batches_.size() < 2) throw std::invalid_argument("need at least two complete batches");
  int N = t_.size();
  double nb = (double)batches_.size();
  std::vector<InfraredRow> rows;
  for (int j = 0; j < n_; ++j)
    for (int o = 0; o < N; ++o) {
      std::vector<int> m(t_.d());
      for (int q = 0; q < t_.d(); ++q) {
        int off = t_.offset(o, q);
        m[q] = off > t_.L() ? off - t_.side() : off;
      }
      int mi = t_.index(m);
      auto k = wavevector(t_, mi);
      double lam = laplacian_eigenvalue(k);
      if (lam < 1e-12) continue;  // k = 0
      double s = 0, s2 = 0;
      for (auto& b : batches_) {
        double x = b[(size_t)j * N + o];
        s += x;
        s2 += x * x;
      }
      InfraredRow r;
      r.k = mi;
      r.j = j;
      r.mean = s / nb;
      double var = std::max(0.0, (s2 - nb * r.mean * r.mean) / (nb - 1));
      r.std_error = std::sqrt(var / nb);
      r.bound = N / (beta * lam);
      r.z = r.std_error > 0 ? (r.mean - r.bound) / r.std_error : (r.mean > r.bound ? INFINITY : -INFINITY);
      r.flagged = r.mean > r.bound && r.z > zmax;
      rows.push_back(r);
    }
  return rows;
}

std::vector<InfraredRow> infrared_check(const std::vector<SpinConfig>& samples, const Torus& t, double beta,
                                        double zmax) {
  if (samples.size() < 4) throw std::invalid_argument("need at least 4 samples");
  InfraredAccumulator acc(t, samples[0].n, std::max<int>(1, (int)samples.size() / 20));
  for (auto& c : samples) acc.add(c);
  return acc.report(beta, zmax);
}

double gaussian_domination_ratio(const SpinConfig& cfg, const Graph& g, double beta, const std::vector<double>& tau) {
  int n = cfg.n;
  if ((int)tau.size() != n * g.nv) throw std::invalid_argument("tau has wrong size");
  double ex = 0;
  for (auto [u, v] : g.edges) {
    double cross = 0, tt = 0;
    for (int j = 0; j < n; ++j) {
      double ds = cfg.at(u)[j] - cfg.at(v)[j];
      double dt = tau[(size_t)u * n + j] - tau[(size_t)v * n + j];
      cross += ds * dt;
      tt += dt * dt;
    }
    ex += 2 * cross + tt;
  }
  return std::exp(-0.5 * beta * ex);
}

ChainEstimate gaussian_domination_estimate(const std::vector<SpinConfig>& samples, const Graph& g, double beta,
                                           const std::vector<double>& tau) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  std::vector<double> r;
  for (auto& c : samples) r.push_back(gaussian_domination_ratio(c, g, beta, tau));
  return estimate(r);
}

// ---------------------------------------------------------------- vortices

std::vector<int> vortex_field(const SpinConfig& cfg, const Torus& t) {
  if (cfg.n != 2 || t.d() != 2) throw std::invalid_argument("vortices need n=2, d=2");
  auto th = cfg.angles();
  std::vector<int> s(t.size());
  for (int v = 0; v < t.size(); ++v) {
    int a = v, b = t.shifted(v, 1, 1), c = t.shifted(b, 0, 1), d = t.shifted(v, 0, 1);
    // clockwise: (x,y) -> (x,y+1) -> (x+1,y+1) -> (x+1,y) -> (x,y)
    double sum = fold(th[b] - th[a]) + fold(th[c] - th[b]) + fold(th[d] - th[c]) + fold(th[a] - th[d]);
    s[v] = (int)std::lround(sum / (2 * std::numbers::pi));
  }
  return s;
}

// ---------------------------------------------------------------- IR integral

namespace {

// e^{-s} I_0(s)
double scaled_i0(double s) {
  if (s < 500) return boost::math::cyl_bessel_i(0, s) * std::exp(-s);
  double u = 1.0 / s;
  double series = 1 + u / 8 + 9 * u * u / 128 + 225 * u * u * u / 3072 + 11025 * u * u * u * u / 98304;
  return series / std::sqrt(2 * std::numbers::pi * s);
}

// midpoint rule of the d-fold integral: by 1/A = int_0^inf e^{-sA} ds the product
// grid sum factorizes into (1D midpoint sum)^d under one s-integral
double midpoint_factorized(int d, int grid) {
  std::vector<double> c(grid);
  for (int i = 0; i < grid; ++i) c[i] = 1.0 - std::cos(std::numbers::pi * (i + 0.5) / grid);
  auto f = [&](double s) {
    double m = 0;
    for (double ci : c) m += std::exp(-s * ci);
    return std::pow(m / grid, d);
  };
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 1e-12);
}

}  // namespace

double ir_integral_bessel(int d) {
  if (d <= 2) return std::numeric_limits<double>::infinity();
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([d](double s) { return std::pow(scaled_i0(s), d); }, 1e-13);
}

IrIntegral ir_integral(int d, int grid) {
  IrIntegral r;
  r.grid = grid;
  if (d <= 2) {
    r.divergent = true;
    return r;
  }
  if (grid < 64) throw std::invalid_argument("grid must be >= 64");
  r.coarse = midpoint_factorized(d, grid);
  r.fine = midpoint_factorized(d, 2 * grid);
  // leading midpoint error near the singular corner is O(h^(d-2)); smooth part O(h^2)
  int p = std::min(d - 2, 2);
  double f = std::pow(2.0, p);
  r.value = r.fine + (r.fine - r.coarse) / (f - 1);
  return r;
}

// ---------------------------------------------------------------- Aizenman

CrossingOutcome crossing_events(const SpinConfig& cfg, const Torus& t, int ell) {
  if (t.d() != 2 || cfg.n != 2) throw std::invalid_argument("crossings need d=2, n=2");
  if (ell < 1 || ell > t.L()) throw std::invalid_argument("need 1 <= ell <= L");
  auto vid = [&](int x, int y) { return t.shifted(t.shifted(0, 0, x), 1, y); };
  const double thr = 1.0 / std::sqrt(2.0);
  std::vector<char> in0(ell * ell);
  for (int y = 0; y < ell; ++y)
    for (int x = 0; x < ell; ++x) in0[y * ell + x] = std::fabs(cfg.at(vid(x, y))[0]) >= thr;
  auto search = [&](bool want, bool diag, bool vertical) {
    std::vector<char> seen(ell * ell, 0);
    std::queue<int> q;
    for (int i = 0; i < ell; ++i) {
      int c = vertical ? i : i * ell;  // start row y=0 or column x=0
      if ((bool)in0[c] == want) {
        seen[c] = 1;
        q.push(c);
      }
    }
    while (!q.empty()) {
      int c = q.front();
      q.pop();
      int x = c % ell, y = c / ell;
      if ((vertical ? y : x) == ell - 1) return true;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          if (!diag && dx && dy) continue;
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= ell || ny >= ell) continue;
          int nc = ny * ell + nx;
          if (!seen[nc] && (bool)in0[nc] == want) {
            seen[nc] = 1;
            q.push(nc);
          }
        }
    }
    return false;
  };
  CrossingOutcome o;
  o.E = search(true, true, true);
  o.F = search(false, false, false);
  return o;
}

AizenmanReport aizenman_crossing_experiment(const std::vector<SpinConfig>& samples, const Torus& t, int ell) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  AizenmanReport rep;
  rep.ell = ell;
  rep.bound = 1.0 / (2.0 * ell * ell);
  rep.samples = (long)samples.size();
  int N = t.size();
  std::vector<std::vector<double>> series(N);
  long cE = 0, cF = 0, cEF = 0;
  for (auto& c : samples) {
    for (int v : vortex_field(c, t))
      if (v) ++rep.vortices;
    auto o = crossing_events(c, t, ell);
    cE += o.E;
    cF += o.F;
    cEF += (o.E || o.F);
    auto C = correlation_function(c, t);
    for (int r = 0; r < N; ++r) series[r].push_back(C[r]);
  }
  rep.pE = (double)cE / samples.size();
  rep.pF = (double)cF / samples.size();
  rep.pEorF = (double)cEF / samples.size();
  rep.max_rho = -INFINITY;
  for (int r = 0; r < N; ++r) {
    int dist = 0;
    for (int j = 0; j < 2; ++j) {
      int o = t.offset(r, j);
      dist += std::min(o, t.side() - o);
    }
    if (dist < ell) continue;
    double m = mean(series[r]);
    if (m > rep.max_rho) {
      rep.max_rho = m;
      rep.argmax = r;
    }
  }
  rep.max_rho_err = estimate(series[rep.argmax]).std_error;
  return rep;
}

}  // namespace onlat
