#include "onlat/spin_samplers.hpp"

#include <cmath>
#include <numbers>

namespace onlat {

namespace {

// rotate s by a uniform angle in [-amax,amax] inside a random plane containing s
void propose(const double* s, int n, double amax, Rng& rng, double* out) {
  if (n == 1) {
    out[0] = -s[0];
    return;
  }
  double w[16];
  std::vector<double> wbig;
  double* wp = w;
  if (n > 16) {
    wbig.resize(n);
    wp = wbig.data();
  }
  double nn;
  do {
    double proj = 0;
    for (int j = 0; j < n; ++j) {
      wp[j] = rng.normal();
      proj += wp[j] * s[j];
    }
    nn = 0;
    for (int j = 0; j < n; ++j) {
      wp[j] -= proj * s[j];
      nn += wp[j] * wp[j];
    }
  } while (nn < 1e-20);
  nn = 1.0 / std::sqrt(nn);
  double th = (2.0 * rng.uniform() - 1.0) * amax;
  double c = std::cos(th), sn = std::sin(th);
  double norm = 0;
  for (int j = 0; j < n; ++j) {
    out[j] = c * s[j] + sn * wp[j] * nn;
    norm += out[j] * out[j];
  }
  norm = 1.0 / std::sqrt(norm);
  for (int j = 0; j < n; ++j) out[j] *= norm;
}

}  // namespace

double metropolis_sweep(SpinConfig& cfg, const Graph& g, const Potential& pot, Rng& rng, double proposal_angle) {
  const int n = cfg.n, nv = cfg.nv;
  std::vector<double> prop(n);
  long acc = 0;
  const bool linear = pot.kind != Potential::Kind::General;
  const double jsign = pot.kind == Potential::Kind::Ferromagnetic ? 1.0 : -1.0;
  for (int step = 0; step < nv; ++step) {
    int v = (int)rng.below(nv);
    double* s = cfg.at(v);
    propose(s, n, proposal_angle, rng, prop.data());
    double dE = 0;
    bool ok = true;
    if (linear) {
      double dot = 0;
      for (int w : g.adj[v]) {
        const double* t = cfg.at(w);
        for (int j = 0; j < n; ++j) dot += (prop[j] - s[j]) * t[j];
      }
      dE = -jsign * pot.beta * dot;
    } else {
      for (int w : g.adj[v]) {
        const double* t = cfg.at(w);
        double rn = 0, ro = 0;
        for (int j = 0; j < n; ++j) {
          rn += prop[j] * t[j];
          ro += s[j] * t[j];
        }
        if (!pot.allowed(rn)) {
          ok = false;
          break;
        }
        dE += pot.eval(rn) - pot.eval(ro);
      }
    }
    if (!ok) continue;
    if (dE <= 0 || rng.uniform() < std::exp(-dE)) {
      for (int j = 0; j < n; ++j) s[j] = prop[j];
      cfg.normalize(v);
      ++acc;
    }
  }
  return nv ? (double)acc / nv : 1.0;
}

int wolff_step(SpinConfig& cfg, const Graph& g, double beta, Rng& rng) {
  const int n = cfg.n, nv = cfg.nv;
  thread_local std::vector<char> in;
  thread_local std::vector<int> stack;
  thread_local std::vector<double> proj;
  in.assign(nv, 0);
  proj.resize(nv);
  std::vector<double> r(n);
  random_unit(n, rng, r.data());
  if (n == 1) r[0] = 1.0;
  auto pr = [&](int v) {
    const double* s = cfg.at(v);
    double p = 0;
    for (int j = 0; j < n; ++j) p += r[j] * s[j];
    return p;
  };
  auto reflect = [&](int v, double p) {
    double* s = cfg.at(v);
    for (int j = 0; j < n; ++j) s[j] -= 2.0 * p * r[j];
    cfg.normalize(v);
  };
  int seed = (int)rng.below(nv);
  stack.clear();
  stack.push_back(seed);
  in[seed] = 1;
  proj[seed] = pr(seed);
  reflect(seed, proj[seed]);
  int size = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    double pu = proj[u];
    for (int w : g.adj[u]) {
      if (in[w]) continue;
      double pw = pr(w);
      double x = -2.0 * beta * pu * pw;
      if (x >= 0) continue;
      if (rng.uniform() < 1.0 - std::exp(x)) {
        in[w] = 1;
        proj[w] = pw;
        reflect(w, pw);
        stack.push_back(w);
        ++size;
      }
    }
  }
  return size;
}

SamplerKind sampler_from_string(const std::string& s) {
  if (s == "metropolis") return SamplerKind::Metropolis;
  if (s == "wolff") return SamplerKind::Wolff;
  if (s == "mixed") return SamplerKind::Mixed;
  throw std::invalid_argument("unknown sampler: " + s);
}

const char* to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::Metropolis:
      return "metropolis";
    case SamplerKind::Wolff:
      return "wolff";
    default:
      return "mixed";
  }
}

ChainResult run_chain(const Graph& g, int n, const Potential& pot, const Schedule& sch, std::uint64_t seed,
                      std::uint64_t stream, const Extractor& f, const StreamFn& on_sample, const SpinConfig* init) {
  if (sch.sweeps <= 0 || sch.burn_in < 0 || sch.thin <= 0) throw std::invalid_argument("schedule needs positive sweeps and thinning");
  if (sch.kind != SamplerKind::Metropolis && pot.kind != Potential::Kind::Ferromagnetic)
    throw std::invalid_argument("Wolff requires a ferromagnetic potential");
  Rng rng(seed, stream);
  ChainResult res;
  res.seed = seed;
  res.stream = stream;
  SpinConfig cfg = init ? *init : SpinConfig(n, g.nv);
  if (cfg.nv != g.nv || cfg.n != n) throw std::invalid_argument("initial state does not match");
  double angle = std::min(std::max(sch.proposal_angle, 1e-3), std::numbers::pi);
  long acc_n = 0, clusters = 0;
  double acc_sum = 0, cl_sum = 0;
  double burn_cl = 0;
  long burn_n = 0, per_sweep = 1;

  auto sweep = [&](bool measure) {
    double a = 0;
    if (sch.kind != SamplerKind::Wolff) {
      a = metropolis_sweep(cfg, g, pot, rng, angle);
      if (measure) {
        acc_sum += a;
        ++acc_n;
      }
    }
    if (sch.kind != SamplerKind::Metropolis) {
      if (!measure) {
        // burn-in: flip until |V| spins moved, and learn the cluster size
        long flipped = 0;
        while (flipped < g.nv) {
          int c = wolff_step(cfg, g, pot.beta, rng);
          flipped += c;
          burn_cl += c;
          ++burn_n;
        }
      } else {
        // a fixed number of flips; stopping on the flipped count would make
        // the measurement time depend on the state and bias the samples
        for (long k = 0; k < per_sweep; ++k) {
          int c = wolff_step(cfg, g, pot.beta, rng);
          cl_sum += c;
          ++clusters;
        }
      }
    }
    return a;
  };

  // burn-in, tuning the proposal angle towards 40-60% acceptance
  double win_acc = 0;
  int win_n = 0;
  for (long s = 0; s < sch.burn_in; ++s) {
    double a = sweep(false);
    if (sch.tune_angle && sch.kind != SamplerKind::Wolff && n >= 2) {
      win_acc += a;
      if (++win_n == 10) {
        double m = win_acc / win_n;
        if (m > 0.6) angle = std::min(angle * 1.15, std::numbers::pi);
        if (m < 0.4) angle = std::max(angle / 1.15, 1e-3);
        win_acc = 0;
        win_n = 0;
      }
    }
  }
  res.proposal_angle = angle;
  if (sch.kind != SamplerKind::Metropolis) {
    // no burn-in: a short pilot run of cluster flips (they keep the law)
    if (burn_n == 0)
      for (int k = 0; k < 20; ++k) {
        burn_cl += wolff_step(cfg, g, pot.beta, rng);
        ++burn_n;
      }
    per_sweep = std::max(1L, std::lround(g.nv / (burn_cl / burn_n)));
  }

  for (long s = 1; s <= sch.sweeps; ++s) {
    sweep(true);
    if (s % sch.thin) continue;
    std::vector<double> obs;
    try {
      obs = f(cfg);
    } catch (const std::exception& e) {
      res.final_state = cfg;
      throw ChainAborted(std::string("observable extractor failed at sweep ") + std::to_string(s) + ": " + e.what(),
                         std::move(res));
    }
    if (res.series.empty()) res.series.resize(obs.size());
    if (obs.size() != res.series.size()) {
      res.final_state = cfg;
      throw ChainAborted("observable extractor changed arity", std::move(res));
    }
    for (size_t k = 0; k < obs.size(); ++k) res.series[k].push_back(obs[k]);
    ++res.samples;
    if (on_sample) on_sample(s, cfg, obs);
  }
  res.acceptance = acc_n ? acc_sum / acc_n : 0.0;
  res.mean_cluster_size = clusters ? cl_sum / clusters : 0.0;
  for (auto& col : res.series) res.estimates.push_back(estimate(col, seed, sch.sweeps));
  res.final_state = std::move(cfg);
  return res;
}

}  // namespace onlat
