#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace onlat {

struct ChainEstimate {
  double mean = 0;
  double std_error = 0;
  long n_samples = 0;
  double tau = 0.5;  // integrated autocorrelation time (0.5 = independent)
  std::uint64_t seed = 0;
  long sweeps = 0;
};

// Sokal automatic windowing, window = smallest W with W >= c*tau(W)
double integrated_autocorrelation(const std::vector<double>& x, double c = 6.0);
ChainEstimate estimate(const std::vector<double>& x, std::uint64_t seed = 0, long sweeps = 0);

// blocked jackknife for f(means of columns); data[k] is one column
struct JackknifeResult {
  double value = 0, std_error = 0;
};
JackknifeResult jackknife(const std::vector<std::vector<double>>& data, int blocks,
                          const std::function<double(const std::vector<double>&)>& f);

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased

struct ChiSquare {
  double stat = 0;
  int dof = 0;
  double p = 1;
  int bins = 0;
};
// counts vs probabilities (sum to 1); adjacent low-expectation bins pooled in
// order of decreasing probability until each pooled bin expects >= min_expected
ChiSquare chi_square(const std::vector<double>& counts, const std::vector<double>& probs, double min_expected = 5.0);

// regularized upper incomplete gamma, p-value helper
double chi2_sf(double stat, int dof);

// least squares of y on columns of X (with weights), returns coefficients and RSS
struct LinFit {
  std::vector<double> coef;
  double rss = 0;
};
LinFit weighted_least_squares(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
                              const std::vector<double>& w);

}  // namespace onlat
