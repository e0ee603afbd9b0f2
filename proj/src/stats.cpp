#include "onlat/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace onlat {

double mean(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double m = mean(x), s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

double integrated_autocorrelation(const std::vector<double>& x, double c) {
  size_t n = x.size();
  if (n < 4) return 0.5;
  double m = mean(x);
  double c0 = 0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= n;
  if (c0 <= 0) return 0.5;
  double tau = 0.5;
  size_t wmax = n / 2;
  for (size_t t = 1; t < wmax; ++t) {
    double ct = 0;
    for (size_t i = 0; i + t < n; ++i) ct += (x[i] - m) * (x[i + t] - m);
    ct /= n;
    tau += ct / c0;
    if ((double)t >= c * tau) break;
  }
  return std::max(tau, 0.5);
}

ChainEstimate estimate(const std::vector<double>& x, std::uint64_t seed, long sweeps) {
  if (x.empty()) throw std::invalid_argument("empty sample");
  ChainEstimate e;
  e.mean = mean(x);
  e.n_samples = (long)x.size();
  e.tau = integrated_autocorrelation(x);
  double var = variance(x);
  e.std_error = std::sqrt(var * 2.0 * e.tau / x.size());
  e.seed = seed;
  e.sweeps = sweeps;
  return e;
}

JackknifeResult jackknife(const std::vector<std::vector<double>>& data, int blocks,
                          const std::function<double(const std::vector<double>&)>& f) {
  if (data.empty() || data[0].empty()) throw std::invalid_argument("empty sample");
  size_t n = data[0].size(), k = data.size();
  blocks = std::max(2, std::min<int>(blocks, (int)n));
  size_t bs = n / blocks;
  size_t used = bs * blocks;
  std::vector<std::vector<double>> bsum(blocks, std::vector<double>(k, 0.0));
  std::vector<double> tot(k, 0.0);
  for (size_t c = 0; c < k; ++c)
    for (size_t i = 0; i < used; ++i) {
      bsum[i / bs][c] += data[c][i];
      tot[c] += data[c][i];
    }
  std::vector<double> full(k);
  for (size_t c = 0; c < k; ++c) full[c] = tot[c] / used;
  std::vector<double> th(blocks);
  for (int b = 0; b < blocks; ++b) {
    std::vector<double> m(k);
    for (size_t c = 0; c < k; ++c) m[c] = (tot[c] - bsum[b][c]) / (used - bs);
    th[b] = f(m);
  }
  double tm = mean(th), s = 0;
  for (double t : th) s += (t - tm) * (t - tm);
  JackknifeResult r;
  r.value = f(full);
  r.std_error = std::sqrt(s * (blocks - 1.0) / blocks);
  return r;
}

double chi2_sf(double stat, int dof) {
  if (dof <= 0) return 1.0;
  if (stat <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

ChiSquare chi_square(const std::vector<double>& counts, const std::vector<double>& probs, double min_expected) {
  if (counts.size() != probs.size()) throw std::invalid_argument("size mismatch");
  double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (n <= 0) throw std::invalid_argument("no samples");
  std::vector<size_t> idx(counts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return probs[a] < probs[b]; });
  std::vector<std::pair<double, double>> groups;  // observed, expected
  double go = 0, ge = 0;
  for (size_t i : idx) {
    if (probs[i] <= 0) {
      if (counts[i] > 0) {
        ChiSquare r;
        r.stat = INFINITY;
        r.p = 0;
        return r;
      }
      continue;
    }
    go += counts[i];
    ge += probs[i] * n;
    if (ge >= min_expected) {
      groups.push_back({go, ge});
      go = ge = 0;
    }
  }
  if (ge > 0) {
    if (groups.empty())
      groups.push_back({go, ge});
    else {
      groups.back().first += go;
      groups.back().second += ge;
    }
  }
  ChiSquare r;
  r.bins = (int)groups.size();
  for (auto [o, e] : groups) r.stat += (o - e) * (o - e) / e;
  r.dof = r.bins - 1;
  r.p = chi2_sf(r.stat, r.dof);
  return r;
}

LinFit weighted_least_squares(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
                              const std::vector<double>& w) {
  size_t n = y.size(), k = X.size();
  Eigen::MatrixXd A(n, k);
  Eigen::VectorXd b(n);
  for (size_t i = 0; i < n; ++i) {
    double sw = std::sqrt(w[i]);
    for (size_t j = 0; j < k; ++j) A(i, j) = sw * X[j][i];
    b(i) = sw * y[i];
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  LinFit f;
  f.coef.assign(c.data(), c.data() + k);
  f.rss = (A * c - b).squaredNorm();
  return f;
}

}  // namespace onlat
