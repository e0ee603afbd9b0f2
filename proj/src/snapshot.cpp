#include "onlat/snapshot.hpp"

#include <stdexcept>

namespace onlat {

using nlohmann::json;

namespace {

void check(const json& j, const char* model) {
  if (!j.is_object() || j.value("schema", "") != kSnapshotSchema)
    throw std::invalid_argument("snapshot schema must be \"v1\"");
  if (j.value("model", "") != model) throw std::invalid_argument(std::string("snapshot model is not ") + model);
}

}  // namespace

json spin_snapshot(const SpinConfig& cfg, const Torus& t, double beta) {
  if (cfg.nv != t.size()) throw std::invalid_argument("configuration does not match the torus");
  json j = {{"schema", kSnapshotSchema}, {"model", "spin"}, {"d", t.d()}, {"L", t.L()},
            {"n", cfg.n},                {"beta", beta},   {"values", cfg.v}};
  if (cfg.n == 2) j["angles"] = cfg.angles();
  return j;
}

SpinConfig spin_from_snapshot(const json& j, int* d, int* L) {
  check(j, "spin");
  int dd = j.at("d"), LL = j.at("L"), n = j.at("n");
  Torus t(dd, LL);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  auto vals = j.at("values").get<std::vector<double>>();
  if ((long)vals.size() != (long)t.size() * n) throw std::invalid_argument("values do not match n * |V|");
  SpinConfig c(n, t.size());
  c.v = std::move(vals);
  if (d) *d = dd;
  if (L) *L = LL;
  return c;
}

json loop_snapshot(const LoopConfig& w, const std::string& domain, double n, double x) {
  json edges = json::array();
  for (auto& e : w.hex_edges()) edges.push_back({{e.p.a, e.p.b}, {e.q.a, e.q.b}});
  return {{"schema", kSnapshotSchema}, {"model", "loop"}, {"domain", domain}, {"n", n},
          {"x", x},                    {"o", w.o()},      {"L", count_loops(w)}, {"edges", edges}};
}

LoopConfig loop_from_snapshot(const json& j, const HexDomain& d) {
  check(j, "loop");
  std::vector<HexEdge> es;
  for (auto& e : j.at("edges")) {
    Hex p{e[0][0], e[0][1]}, q{e[1][0], e[1][1]};
    es.push_back(make_edge(p, q));
  }
  return validate(d, es);
}

json hardhex_snapshot(const HardHexagon& h, double lambda) {
  json occ = json::array();
  for (auto& s : h.occupied_sites()) occ.push_back({s[0], s[1]});
  auto rho = h.densities();
  return {{"schema", kSnapshotSchema}, {"model", "hardhex"}, {"width", h.width()},
          {"height", h.height()},      {"lambda", lambda},   {"densities", rho},
          {"occupied", occ}};
}

std::vector<std::array<int, 2>> hardhex_from_snapshot(const json& j) {
  check(j, "hardhex");
  std::vector<std::array<int, 2>> r;
  for (auto& s : j.at("occupied")) r.push_back({s[0].get<int>(), s[1].get<int>()});
  return r;
}

}  // namespace onlat
