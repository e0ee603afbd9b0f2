// onlat_run: experiment runner. One JSON config in, one artifact directory out.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "onlat/loop.hpp"
#include "onlat/loop_samplers.hpp"
#include "onlat/loop_structure.hpp"
#include "onlat/observables.hpp"
#include "onlat/oracle.hpp"
#include "onlat/representations.hpp"
#include "onlat/saw.hpp"
#include "onlat/snapshot.hpp"
#include "onlat/spin_samplers.hpp"

#ifndef ONLAT_GIT_HASH
#define ONLAT_GIT_HASH "unknown"
#endif

using namespace onlat;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// fixed formatting so that identical runs give identical bytes
std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& p, const std::vector<std::string>& header) : f_(p, std::ios::binary) {
    if (!f_) throw std::runtime_error("cannot write " + p.string());
    row_strings(header);
  }
  template <class... T>
  void row(const T&... v) {
    std::vector<std::string> s{cell(v)...};
    row_strings(s);
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  void row_strings(const std::vector<std::string>& s) {
    for (size_t i = 0; i < s.size(); ++i) f_ << (i ? "," : "") << s[i];
    f_ << '\n';
  }
  std::ofstream f_;
};

// run log, flushed per line so a failed run leaves something behind
class Log {
 public:
  explicit Log(const fs::path& p) : f_(p) {}
  void operator()(const std::string& s) {
    std::lock_guard<std::mutex> lk(m_);
    f_ << s << '\n';
    f_.flush();
  }

 private:
  std::ofstream f_;
  std::mutex m_;
};

// typed access to the config with the allowed keys declared per kind
class Params {
 public:
  Params(const json& j, const std::set<std::string>& allowed) : j_(j) {
    for (auto& [k, v] : j.items())
      if (!allowed.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  bool has(const std::string& k) const { return j_.contains(k); }
  double real(const std::string& k) const { return get(k, [](const json& v) { return v.is_number(); }).get<double>(); }
  double real(const std::string& k, double def) const { return has(k) ? real(k) : def; }
  long integer(const std::string& k) const {
    auto& v = get(k, [](const json& v) { return v.is_number(); });
    double d = v.get<double>();
    if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError("key '" + k + "' must be an integer");
    return (long)d;
  }
  long integer(const std::string& k, long def) const { return has(k) ? integer(k) : def; }
  long positive(const std::string& k, long def) const {
    long v = integer(k, def);
    if (v <= 0) throw ConfigError("key '" + k + "' must be positive");
    return v;
  }
  std::string str(const std::string& k) const {
    return get(k, [](const json& v) { return v.is_string(); }).get<std::string>();
  }
  std::string str(const std::string& k, const std::string& def) const { return has(k) ? str(k) : def; }
  bool flag(const std::string& k, bool def) const {
    return has(k) ? get(k, [](const json& v) { return v.is_boolean(); }).get<bool>() : def;
  }

 private:
  const json& get(const std::string& k, const std::function<bool(const json&)>& ok) const {
    if (!j_.contains(k)) throw ConfigError("missing config key '" + k + "'");
    if (!ok(j_.at(k))) throw ConfigError("config key '" + k + "' has the wrong type");
    return j_.at(k);
  }
  const json& j_;
};

const std::set<std::string> kCommon{"kind", "seed", "out"};
std::set<std::string> keys(std::initializer_list<const char*> ks) {
  std::set<std::string> s(kCommon);
  for (auto k : ks) s.insert(k);
  return s;
}

struct Ctx {
  fs::path out;
  std::uint64_t seed = 0;
  int threads = 1;
  bool dry = false;
  Log* log = nullptr;
  json summary = json::object();
};

// a validated experiment, ready to run
struct Experiment {
  std::function<void(Ctx&)> run;
};

Graph graph_from_spec(const std::string& s) {
  int a = 0, b = 0;
  if (std::sscanf(s.c_str(), "cycle(%d)", &a) == 1 && a >= 3) return cycle_graph(a);
  if (std::sscanf(s.c_str(), "path(%d)", &a) == 1 && a >= 1) return path_graph(a);
  if (std::sscanf(s.c_str(), "grid(%d,%d)", &a, &b) == 2 && a >= 1 && b >= 1) return grid_graph(a, b);
  if (std::sscanf(s.c_str(), "torus(%d,%d)", &a, &b) == 2 && a >= 1 && b >= 1) return Torus(a, b).graph();
  throw ConfigError("bad graph spec '" + s + "'");
}

HexDomain domain_from(const Params& p) {
  try {
    return make_domain(p.str("domain"), p.flag("type0", true));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad domain: ") + e.what());
  }
}

Potential potential_from(const Params& p, double beta) {
  auto s = p.str("potential", "ferromagnetic");
  if (s == "ferromagnetic") return Potential::ferromagnetic(beta);
  if (s == "antiferromagnetic") return Potential::antiferromagnetic(beta);
  throw ConfigError("potential must be ferromagnetic or antiferromagnetic");
}

SamplerKind sampler_from(const Params& p, const std::string& def) {
  try {
    return sampler_from_string(p.str("sampler", def));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

double magnetization_norm(const SpinConfig& c) {
  std::vector<double> m(c.n, 0.0);
  for (int i = 0; i < c.nv; ++i)
    for (int j = 0; j < c.n; ++j) m[j] += c.at(i)[j];
  double s = 0;
  for (double v : m) s += v * v;
  return std::sqrt(s) / c.nv;
}

// run f(i) for i < count on up to `threads` workers; chains own their files
void parallel_for(int count, int threads, const std::function<void(int)>& f) {
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> err(count);
  std::mutex m;
  int next = 0;
  auto worker = [&] {
    for (;;) {
      int i;
      {
        std::lock_guard<std::mutex> lk(m);
        if (next >= count) return;
        i = next++;
      }
      try {
        f(i);
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
  };
  int nt = std::max(1, std::min(threads, count));
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
}

std::string chain_name(int i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "chain_%03d%s", i, ext);
  return buf;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

// ---- experiment kinds

Experiment spin_sample(const json& cfg) {
  Params p(cfg, keys({"d", "L", "n", "beta", "potential", "sampler", "burn_in", "sweeps", "thin", "chains"}));
  int d = p.integer("d"), L = p.integer("L"), n = p.integer("n");
  double beta = p.real("beta");
  require(d >= 1 && d <= 6, "d must be in 1..6");
  require(L >= 1, "L must be >= 1");
  require(n >= 1 && n <= 8, "n must be in 1..8");
  require(beta >= 0, "beta must be >= 0");
  auto pot = potential_from(p, beta);
  Schedule sch;
  sch.kind = sampler_from(p, "mixed");
  if (pot.kind != Potential::Kind::Ferromagnetic) require(sch.kind == SamplerKind::Metropolis, "Wolff needs the ferromagnetic coupling");
  sch.burn_in = p.integer("burn_in", 1000);
  sch.sweeps = p.positive("sweeps", 10000);
  sch.thin = p.positive("thin", 1);
  int chains = p.positive("chains", 1);
  require(sch.burn_in >= 0, "burn_in must be >= 0");
  return {[=](Ctx& c) {
    Torus t(d, L);
    std::vector<json> rows(chains);
    parallel_for(chains, c.threads, [&](int i) {
      Csv csv(c.out / chain_name(i, ".csv"), {"sweep", "energy", "magnetization_norm"});
      auto ex = [&](const SpinConfig& s) { return std::vector<double>{energy(s, t.graph(), pot), magnetization_norm(s)}; };
      auto on = [&](long sweep, const SpinConfig&, const std::vector<double>& v) { csv.row(sweep, v[0], v[1]); };
      auto r = run_chain(t.graph(), n, pot, sch, c.seed, i, ex, on);
      write_json(c.out / chain_name(i, "_final.json"), spin_snapshot(r.final_state, t, beta));
      rows[i] = {{"chain", i},
                 {"samples", r.samples},
                 {"acceptance", r.acceptance},
                 {"mean_cluster_size", r.mean_cluster_size},
                 {"proposal_angle", r.proposal_angle},
                 {"energy", {{"mean", r.estimates[0].mean}, {"std_error", r.estimates[0].std_error}, {"tau", r.estimates[0].tau}}},
                 {"magnetization_norm",
                  {{"mean", r.estimates[1].mean}, {"std_error", r.estimates[1].std_error}, {"tau", r.estimates[1].tau}}}};
      (*c.log)("chain " + std::to_string(i) + " done, " + std::to_string(r.samples) + " samples");
    });
    c.summary["chains"] = rows;
    c.summary["sampler"] = to_string(sch.kind);
    if (n >= 2 && sch.kind != SamplerKind::Metropolis) c.summary["wolff_reflection"] = "uniform random hyperplane";
  }};
}

Experiment loop_sample(const json& cfg) {
  Params p(cfg, keys({"domain", "type0", "n", "x", "burn_in", "steps", "thin"}));
  auto dom = std::make_shared<HexDomain>(domain_from(p));
  double n = p.real("n"), x = p.real("x");
  require(n > 0 && x > 0, "n and x must be positive");
  long burn = p.integer("burn_in", 0), steps = p.positive("steps", 100000), thin = p.positive("thin", 1000);
  auto spec = p.str("domain");
  return {[=](Ctx& c) {
    LoopChain ch(*dom, n, x, c.seed);
    ch.run(burn);
    Csv csv(c.out / "loop.csv", {"step", "o", "L"});
    for (long s = 1; s <= steps; ++s) {
      ch.step();
      if (s % thin == 0) csv.row(s, ch.state().o(), ch.L());
    }
    write_json(c.out / "final.json", loop_snapshot(ch.state(), spec, n, x));
    c.summary["acceptance"] = (double)ch.accepted() / std::max(1L, ch.steps());
    c.summary["final_o"] = ch.state().o();
    c.summary["final_L"] = ch.L();
  }};
}

Experiment saw(const json& cfg) {
  Params p(cfg, keys({"k_max", "origin"}));
  int k = p.integer("k_max"), o = p.integer("origin", 0);
  require(k >= 1 && k <= 30, "k_max must be in 1..30");
  require(o >= 0 && o <= 2, "origin must be 0, 1 or 2");
  return {[=](Ctx& c) {
    auto t = enumerate_saw(k, o);
    auto e = connective_estimates(t);
    Csv csv(c.out / "saw.csv", {"k", "s_k", "root", "running_inf"});
    for (int i = 0; i <= k; ++i) csv.row(i, t.s[i], i ? e.root[i] : 0.0, i ? e.running[i] : 0.0);
    c.summary["upper"] = e.upper;
    c.summary["gap"] = e.gap;
  }};
}

Experiment oracle(const json& cfg) {
  Params p(cfg, keys({"model", "graph", "beta", "p", "q", "domain", "type0", "n", "x", "cache"}));
  auto model = p.str("model");
  std::string cache = p.str("cache", "");
  json key = {{"model", model}};
  std::function<ExactTable()> compute;
  if (model == "ising" || model == "xy") {
    auto gs = p.str("graph");
    auto g = std::make_shared<Graph>(graph_from_spec(gs));
    double beta = p.real("beta");
    require(beta >= 0, "beta must be >= 0");
    if (model == "ising") require(g->nv <= 24, "ising oracle needs |V| <= 24");
    if (model == "xy") require(g->nv <= 8, "xy oracle needs |V| <= 8");
    key["graph"] = g->canonical();
    key["beta"] = beta;
    if (model == "ising")
      compute = [g, beta] { return exact_ising(*g, beta); };
    else
      compute = [g, beta] { return exact_xy_quadrature(*g, Potential::ferromagnetic(beta)); };
  } else if (model == "fk") {
    auto g = std::make_shared<Graph>(graph_from_spec(p.str("graph")));
    double pp = p.real("p"), q = p.real("q", 2.0);
    require(pp >= 0 && pp <= 1 && q > 0, "need 0 <= p <= 1 and q > 0");
    require(g->ne() <= 20, "fk oracle needs |E| <= 20");
    key["graph"] = g->canonical();
    key["p"] = pp;
    key["q"] = q;
    compute = [g, pp, q] { return exact_fk(*g, pp, q); };
  } else if (model == "loop") {
    auto dom = std::make_shared<HexDomain>(domain_from(p));
    double n = p.real("n"), x = p.real("x");
    require(n > 0 && x > 0, "n and x must be positive");
    key["domain"] = p.str("domain");
    key["type0"] = p.flag("type0", true);
    key["n"] = n;
    key["x"] = x;
    compute = [dom, n, x] { return exact_loop(*dom, n, x); };
  } else {
    throw ConfigError("oracle model must be ising, xy, fk or loop");
  }
  return {[=](Ctx& c) {
    auto to_json = [&] {
      auto t = compute();
      json j = {{"logZ", t.logZ}, {"nv", t.nv}, {"rho", t.rho}, {"obs", t.obs}};
      return j.dump();
    };
    json v = json::parse(cache.empty() ? to_json() : oracle_cached(cache, key.dump(), to_json));
    int nv = v["nv"];
    auto rho = v["rho"].get<std::vector<double>>();
    if (!rho.empty()) {
      Csv csv(c.out / "oracle.csv", {"x", "y", "rho"});
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) csv.row(a, b, rho[(size_t)a * nv + b]);
    }
    c.summary["logZ"] = v["logZ"];
    c.summary["obs"] = v["obs"];
    c.summary["key"] = key;
  }};
}

Experiment ir(const json& cfg) {
  Params p(cfg, keys({"d", "grid"}));
  int d = p.integer("d"), grid = p.integer("grid", 128);
  require(d >= 1 && d <= 64, "d must be in 1..64");
  require(grid >= 64, "grid must be >= 64");
  return {[=](Ctx& c) {
    auto r = ir_integral(d, grid);
    double b = r.divergent ? INFINITY : ir_integral_bessel(d);
    Csv csv(c.out / "ir.csv", {"d", "grid", "divergent", "value", "coarse", "fine", "bessel"});
    csv.row(d, r.grid, r.divergent, r.value, r.coarse, r.fine, b);
    c.summary["value"] = r.divergent ? json("divergent") : json(r.value);
  }};
}

Experiment hardhex(const json& cfg) {
  Params p(cfg, keys({"width", "height", "lambda", "burn_in", "sweeps", "thin", "ordered"}));
  int w = p.integer("width"), h = p.integer("height");
  double lambda = p.real("lambda");
  require(w >= 3 && h >= 3 && w % 3 == 0 && h % 3 == 0, "width and height must be multiples of 3");
  require(lambda > 0, "lambda must be positive");
  long burn = p.integer("burn_in", 1000), sweeps = p.positive("sweeps", 10000), thin = p.positive("thin", 10);
  bool ordered = p.flag("ordered", false);
  return {[=](Ctx& c) {
    HardHexagon hh(w, h, lambda, c.seed, 0, ordered);
    for (long s = 0; s < burn; ++s) hh.sweep();
    Csv csv(c.out / "hardhex.csv", {"sweep", "rho0", "rho1", "rho2", "density"});
    std::array<double, 3> acc{0, 0, 0};
    long m = 0;
    for (long s = 1; s <= sweeps; ++s) {
      hh.sweep();
      if (s % thin) continue;
      auto r = hh.densities();
      csv.row(s, r[0], r[1], r[2], (double)hh.occupied_count() / hh.size());
      for (int k = 0; k < 3; ++k) acc[k] += r[k];
      ++m;
    }
    write_json(c.out / "final.json", hardhex_snapshot(hh, lambda));
    c.summary["mean_sublattice_density"] = {acc[0] / m, acc[1] / m, acc[2] / m};
    c.summary["lambda_c"] = hard_hexagon_lambda_c();
  }};
}

Experiment repair_audit(const json& cfg) {
  Params p(cfg, keys({"domain", "type0", "n", "x", "burn_in", "steps", "thin"}));
  require(p.flag("type0", true), "repair needs a type-0 domain");
  auto dom = std::make_shared<HexDomain>(domain_from(p));
  double n = p.real("n"), x = p.real("x");
  require(n > 0 && x > 0, "n and x must be positive");
  long burn = p.integer("burn_in", 10000), steps = p.positive("steps", 1000000), thin = p.positive("thin", 100);
  return {[=](Ctx& c) {
    LoopChain ch(*dom, n, x, c.seed);
    ch.run(burn);
    Csv csv(c.out / "audit.csv", {"step", "V", "ebar_on", "d_o", "d_L", "ok", "weight_gain"});
    bool gain_applies = n >= 1 && n * std::pow(x, 6) >= 1;
    long states = 0, violations = 0, gain_fail = 0;
    int maxV = 0;
    std::string first;
    for (long s = 1; s <= steps; ++s) {
      ch.step();
      if (s % thin) continue;
      auto r = repair_identities(ch.state());
      bool gain = !gain_applies || weight_gain_check(r, n, x).holds;
      csv.row(s, r.V, r.ebar_on, r.d_o, r.d_L, r.ok(), gain);
      ++states;
      maxV = std::max(maxV, r.V);
      if (!r.ok()) {
        ++violations;
        if (first.empty()) first = "step " + std::to_string(s) + ": " + r.message;
      }
      if (!gain) ++gain_fail;
    }
    json rep = {{"states", states},
                {"identity_violations", violations},
                {"weight_gain_checked", gain_applies},
                {"weight_gain_failures", gain_fail},
                {"max_V", maxV},
                {"first_violation", first}};
    write_json(c.out / "report.json", rep);
    c.summary["report"] = rep;
  }};
}

Experiment dgff(const json& cfg) {
  Params p(cfg, keys({"L", "beta", "samples"}));
  int L = p.integer("L");
  double beta = p.real("beta");
  long samples = p.positive("samples", 1000);
  require(L >= 2, "L must be >= 2");
  require(beta > 0, "beta must be positive");
  return {[=](Ctx& c) {
    Torus t(2, L);
    Rng rng(c.seed);
    std::vector<std::vector<double>> col(L + 1);
    for (long s = 0; s < samples; ++s) {
      auto h = dgff_sample(t, beta, rng);
      for (int r = 0; r <= L; ++r) col[r].push_back(h[t.index({r, 0})] * h[t.index({r, 0})]);
    }
    Csv csv(c.out / "dgff.csv", {"r", "var_mc", "var_mc_err", "var_exact"});
    for (int r = 0; r <= L; ++r) {
      auto e = estimate(col[r]);
      csv.row(r, e.mean, e.std_error, dgff_variance(t, beta, t.index({r, 0})));
    }
  }};
}

Experiment aizenman(const json& cfg) {
  Params p(cfg, keys({"L", "beta", "ell", "sampler", "burn_in", "sweeps", "thin"}));
  int L = p.integer("L"), ell = p.integer("ell", 4);
  double beta = p.real("beta");
  require(L >= 2 && ell >= 1 && 2 * ell <= 2 * L, "need L >= 2 and 1 <= ell <= L");
  require(beta >= 0, "beta must be >= 0");
  Schedule sch;
  sch.kind = sampler_from(p, "mixed");
  sch.burn_in = p.integer("burn_in", 1000);
  sch.sweeps = p.positive("sweeps", 10000);
  sch.thin = p.positive("thin", 10);
  return {[=](Ctx& c) {
    Torus t(2, L);
    std::vector<SpinConfig> samples;
    auto on = [&](long, const SpinConfig& s, const std::vector<double>&) { samples.push_back(s); };
    run_chain(t.graph(), 2, Potential::ferromagnetic(beta), sch, c.seed, 0,
              [](const SpinConfig&) { return std::vector<double>{}; }, on);
    auto r = aizenman_crossing_experiment(samples, t, ell);
    Csv csv(c.out / "aizenman.csv",
            {"ell", "bound", "max_rho", "max_rho_err", "argmax", "pE", "pF", "pEorF", "vortices", "samples"});
    csv.row(r.ell, r.bound, r.max_rho, r.max_rho_err, r.argmax, r.pE, r.pF, r.pEorF, r.vortices, r.samples);
    c.summary["max_rho_exceeds_bound"] = r.max_rho > r.bound;
    write_json(c.out / "final.json", spin_snapshot(samples.back(), t, beta));
  }};
}

const std::map<std::string, std::function<Experiment(const json&)>> kKinds{
    {"spin-sample", spin_sample}, {"loop-sample", loop_sample}, {"saw", saw},
    {"oracle", oracle},           {"ir-integral", ir},          {"hardhex", hardhex},
    {"repair-audit", repair_audit}, {"dgff", dgff},             {"aizenman", aizenman}};

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"onlat experiment runner"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  std::string config_path, out_opt;
  std::uint64_t seed_opt = 0;
  int threads = 1;
  bool dry = false;
  run->add_option("config", config_path, "config JSON")->required();
  auto* seed_flag = run->add_option("--seed", seed_opt, "override the config seed");
  run->add_option("--out", out_opt, "output directory (overrides config)");
  run->add_flag("--dry-run", dry, "validate the config and exit");
  run->add_option("--threads", threads, "worker threads for multi-chain runs")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  json cfg;
  Experiment ex;
  Ctx ctx;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read " + config_path);
    cfg = json::parse(in, nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object()) throw ConfigError("config is not a JSON object");
    if (!cfg.contains("kind") || !cfg["kind"].is_string()) throw ConfigError("config needs a string 'kind'");
    auto it = kKinds.find(cfg["kind"].get<std::string>());
    if (it == kKinds.end()) throw ConfigError("unknown kind '" + cfg["kind"].get<std::string>() + "'");
    if (cfg.contains("seed") && !cfg["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    if (cfg.contains("out") && !cfg["out"].is_string()) throw ConfigError("out must be a string");
    ctx.seed = *seed_flag ? seed_opt : cfg.value("seed", std::uint64_t{0});
    std::string out = !out_opt.empty() ? out_opt : cfg.value("out", std::string{});
    if (out.empty()) throw ConfigError("no output directory (config 'out' or --out)");
    ctx.out = out;
    ex = it->second(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (dry) {
    std::cout << "config ok: " << cfg["kind"].get<std::string>() << '\n';
    return 0;
  }

  ctx.threads = threads;
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) {
    std::cerr << "cannot create " << ctx.out << ": " << ec.message() << '\n';
    return 1;
  }
  Log log(ctx.out / "run.log");
  ctx.log = &log;
  json meta = {{"git_hash", ONLAT_GIT_HASH}, {"seed", ctx.seed}, {"rng", Rng::kName},
               {"config", cfg},         {"threads", threads}, {"started", utc_now()},
               {"vortex_orientation", "clockwise"}};
  log("kind " + cfg["kind"].get<std::string>() + " seed " + std::to_string(ctx.seed));
  int rc = 0;
  try {
    ex.run(ctx);
    meta["status"] = "ok";
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    std::cerr << "runtime error: " << e.what() << '\n';
    meta["status"] = "failed";
    meta["error"] = e.what();
    rc = 1;
  }
  meta["finished"] = utc_now();
  meta["summary"] = ctx.summary;
  try {
    write_json(ctx.out / "metadata.json", meta);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    rc = 1;
  }
  return rc;
}
