#pragma once
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onlat/rng.hpp"
#include "onlat/spin.hpp"
#include "onlat/stats.hpp"

namespace onlat {

// |V| single-site proposals at uniformly chosen sites; returns acceptance fraction
double metropolis_sweep(SpinConfig& cfg, const Graph& g, const Potential& pot, Rng& rng, double proposal_angle);
// one Wolff cluster flip about a uniformly random hyperplane; returns cluster size
int wolff_step(SpinConfig& cfg, const Graph& g, double beta, Rng& rng);

enum class SamplerKind { Metropolis, Wolff, Mixed };
SamplerKind sampler_from_string(const std::string& s);
const char* to_string(SamplerKind k);

struct Schedule {
  SamplerKind kind = SamplerKind::Metropolis;
  long burn_in = 100;
  long sweeps = 1000;  // measured sweeps
  long thin = 1;
  double proposal_angle = 1.0;
  bool tune_angle = true;
};

using Extractor = std::function<std::vector<double>(const SpinConfig&)>;
using StreamFn = std::function<void(long sweep, const SpinConfig&, const std::vector<double>&)>;

struct ChainResult {
  std::vector<ChainEstimate> estimates;
  std::vector<std::vector<double>> series;  // one column per observable
  double acceptance = 0;
  double mean_cluster_size = 0;
  double proposal_angle = 0;
  long samples = 0;
  std::uint64_t seed = 0, stream = 0;
  SpinConfig final_state;
};

struct ChainAborted : std::runtime_error {
  ChainResult partial;
  ChainAborted(const std::string& what, ChainResult p) : std::runtime_error(what), partial(std::move(p)) {}
};

// One Wolff "sweep" = a fixed number of cluster flips, about |V| / (mean cluster
// size during burn-in); frozen before measurement.
// Mixed = one Metropolis sweep followed by one Wolff sweep.
ChainResult run_chain(const Graph& g, int n, const Potential& pot, const Schedule& sch, std::uint64_t seed,
                      std::uint64_t stream, const Extractor& f, const StreamFn& on_sample = {},
                      const SpinConfig* init = nullptr);

}  // namespace onlat
