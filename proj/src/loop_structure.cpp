#include "onlat/loop_structure.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace onlat {

namespace {

// neighbours within one colour class: h + dir[i] + dir[i+1]
constexpr std::array<Hex, 6> kSubDir = {{{1, 3}, {-1, 3}, {-2, 0}, {-1, -3}, {1, -3}, {2, 0}}};

int edge_shift(const HexWindow& win, int e, int k) {
  int s = win.edge_index(shift(win.edge(e), k));
  if (s < 0) throw std::logic_error("shifted edge leaves the window");
  return s;
}

}  // namespace

LoopConfig ground_state(const HexDomain& d, int c) {
  LoopConfig w(d);
  for (int h : d.hexes())
    if (color(d.win().hex(h)) == c)
      for (int e : d.win().hex_edges(h)) w.set(e, true);
  return w;
}

ClusterDecomposition find_clusters(const LoopConfig& w) {
  const HexWindow& win = w.win();
  const HexDomain& dom = w.domain();
  const int nh = win.num_hexes(), nv = win.num_vertices(), ne = win.num_edges();
  ClusterDecomposition cd;
  std::array<std::vector<Cluster>, 3> cand;
  std::array<std::vector<int>, 3> owner;  // vertex -> candidate index

  for (int c = 0; c < 3; ++c) {
    std::vector<char> flower(nh, 0), outside(nh, 0);
    std::vector<int> cls;
    for (int h = 0; h < nh; ++h)
      if (color(win.hex(h)) == c) {
        cls.push_back(h);
        flower[h] = is_flower(w, h);
      }
    auto nbrs = [&](int h, auto&& f) {
      for (auto& d : kSubDir) {
        int g = win.hex_index(win.hex(h) + d);
        if (g >= 0) f(g);
      }
    };
    // outside: non-flowers reachable from the window border
    std::queue<int> q;
    for (int h : cls) {
      if (flower[h]) continue;
      bool border = false;
      for (auto& d : kSubDir)
        if (win.hex_index(win.hex(h) + d) < 0) border = true;
      if (border) {
        outside[h] = 1;
        q.push(h);
      }
    }
    while (!q.empty()) {
      int h = q.front();
      q.pop();
      nbrs(h, [&](int g) {
        if (!flower[g] && !outside[g]) {
          outside[g] = 1;
          q.push(g);
        }
      });
    }
    // flower components touching the outside, filled
    std::vector<int> comp(nh, -1);
    std::vector<char> filled(nh, 0);
    owner[c].assign(nv, -1);
    int ncomp = 0;
    for (int s : cls) {
      if (!flower[s] || comp[s] >= 0) continue;
      std::vector<int> members{s};
      comp[s] = ncomp;
      bool top = false;
      for (std::size_t i = 0; i < members.size(); ++i)
        nbrs(members[i], [&](int g) {
          if (outside[g]) top = true;
          if (flower[g] && comp[g] < 0) {
            comp[g] = ncomp;
            members.push_back(g);
          }
        });
      ++ncomp;
      if (!top) continue;
      Cluster cl;
      cl.c = c;
      for (int m : members) filled[m] = 1;
      cl.hexes = members;
      for (std::size_t i = 0; i < cl.hexes.size(); ++i)
        nbrs(cl.hexes[i], [&](int g) {
          if (!outside[g] && !filled[g]) {
            filled[g] = 1;
            cl.hexes.push_back(g);
          }
        });
      int id = (int)cand[c].size();
      for (int h : cl.hexes)
        for (int v : win.hex_vertices(h)) {
          if (v < 0) throw std::logic_error("garden hexagon at the window border");
          cl.vertices.push_back(v);
          owner[c][v] = id;
        }
      std::sort(cl.vertices.begin(), cl.vertices.end());
      cand[c].push_back(std::move(cl));
    }
  }

  cd.edge_class.assign(ne, -1);
  cd.region.assign(ne, 0);
  for (int e = 0; e < ne; ++e) cd.region[e] = dom.in_edge(e) || dom.star_edge(e);
  std::vector<char> in_cluster_vertex(nv, 0);
  for (int c = 0; c < 3; ++c)
    for (auto& cl : cand[c]) {
      bool contained = false;
      for (int c2 = 0; c2 < 3 && !contained; ++c2) {
        if (c2 == c) continue;
        int o = owner[c2][cl.vertices[0]];
        if (o < 0) continue;
        contained = std::all_of(cl.vertices.begin(), cl.vertices.end(), [&](int v) { return owner[c2][v] == o; });
      }
      if (contained) continue;
      std::vector<char> mark(ne, 0);
      for (int v : cl.vertices) {
        in_cluster_vertex[v] = 1;
        for (int e : win.vertex_edges(v))
          if (e >= 0 && !mark[e]) {
            mark[e] = 1;
            cl.edges.push_back(e);
          }
      }
      std::sort(cl.edges.begin(), cl.edges.end());
      for (int e : cl.edges) {
        if (cd.edge_class[e] >= 0) throw std::logic_error("clusters are not edge-disjoint");
        cd.edge_class[e] = c;
      }
      std::vector<HexVertex> hv;
      for (int v : cl.vertices) hv.push_back(win.vertex(v));
      cl.sigma = enclosing_circuit(hv);
      cd.clusters[c].push_back(std::move(cl));
    }
  for (int v : dom.vertices())
    if (!in_cluster_vertex[v]) cd.V.push_back(v);
  std::vector<char> covered(ne, 0);
  for (int e = 0; e < ne; ++e) {
    if (!cd.region[e]) continue;
    if (cd.edge_class[e] < 0) cd.ebar.push_back(e);
    if (cd.edge_class[e] == 0) covered[e] = 1;
    if (cd.edge_class[e] == 1) covered[edge_shift(win, e, -1)] = 1;
    if (cd.edge_class[e] == 2) covered[edge_shift(win, e, 1)] = 1;
  }
  for (int e = 0; e < ne; ++e)
    if (cd.region[e] && !covered[e]) cd.ebad.push_back(e);
  return cd;
}

std::vector<int> boundary_deviation(const LoopConfig& w) { return find_clusters(w).V; }

namespace {

// per-edge multiplicity of the three pieces; piece id stored to detect overlaps
struct Pieces {
  std::vector<int> count;
  int overlaps = 0;       // between different pieces
  int inner_overlaps = 0;  // inside the shifted piece
};

Pieces repair_pieces(const LoopConfig& w, const ClusterDecomposition& cd) {
  const HexWindow& win = w.win();
  int ne = win.num_edges();
  Pieces p;
  p.count.assign(ne, 0);
  std::vector<int> piece(ne, -1);
  auto add = [&](int e, int id) {
    if (piece[e] >= 0) {
      if (piece[e] != id)
        ++p.overlaps;
      else
        ++p.inner_overlaps;
      return;
    }
    piece[e] = id;
    ++p.count[e];
  };
  for (int e : w.edges()) {
    int c = cd.edge_class[e];
    if (c == 0) add(e, 0);
    if (c == 1) add(edge_shift(win, e, -1), 1);
    if (c == 2) add(edge_shift(win, e, 1), 1);
  }
  for (int e : cd.ebad)
    if (in_ground(win, e, 0)) add(e, 2);
  return p;
}

}  // namespace

LoopConfig repair(const LoopConfig& w, const ClusterDecomposition& cd) {
  auto p = repair_pieces(w, cd);
  if (p.overlaps) throw std::logic_error("repair pieces overlap");
  LoopConfig r(w.domain());
  for (int e = 0; e < (int)p.count.size(); ++e)
    if (p.count[e]) r.set(e, true);
  return r;
}

LoopConfig repair(const LoopConfig& w) { return repair(w, find_clusters(w)); }

RepairReport repair_identities(const LoopConfig& w) {
  RepairReport r;
  auto fail = [&](const std::string& m) {
    if (r.message.empty()) r.message = m;
  };
  ClusterDecomposition cd;
  try {
    cd = find_clusters(w);
  } catch (const std::exception& e) {
    fail(e.what());
    return r;
  }
  r.partition = true;  // edge-disjointness is enforced inside find_clusters
  r.V = (int)cd.V.size();
  LoopConfig eb(w.domain());
  for (int e : cd.ebar)
    if (w.has(e)) {
      eb.set(e, true);
      ++r.ebar_on;
    }
  try {
    r.ebar_loops = count_loops(eb);
  } catch (const std::exception& e) {
    fail(std::string("w cap E-bar: ") + e.what());
    return r;
  }
  auto p = repair_pieces(w, cd);
  r.disjoint = p.overlaps == 0;
  if (!r.disjoint) fail("repair pieces overlap");
  LoopConfig R(w.domain());
  try {
    for (int e = 0; e < (int)p.count.size(); ++e)
      if (p.count[e]) R.set(e, true);
    int LR = count_loops(R);
    r.valid = true;
    r.d_o = R.o() - w.o();
    r.d_L = LR - count_loops(w);
  } catch (const std::exception& e) {
    fail(std::string("repaired configuration invalid: ") + e.what());
    return r;
  }
  r.identities = r.d_o == r.V - r.ebar_on && 6 * r.d_L == r.V - 6 * r.ebar_loops;
  if (!r.identities) fail("counting identity violated");
  r.bounds = r.d_o >= 0 && r.d_o <= r.V && 30 * r.d_L >= 2 * r.V + 3 * std::abs(r.d_o);
  if (!r.bounds) fail("bound violated");
  return r;
}

LoopConfig restrict_to(const LoopConfig& w, const HexDomain& sub) {
  LoopConfig r(sub);
  for (int e : sub.edges()) {
    int f = w.win().edge_index(sub.win().edge(e));
    if (f >= 0 && w.has(f)) r.set(e, true);
  }
  return r;
}

std::optional<HexDomain> find_breakup(const LoopConfig& w, int u) {
  const HexWindow& win = w.win();
  const HexDomain& dom = w.domain();
  int nv = win.num_vertices();
  if (!dom.in_vertex(u)) throw std::invalid_argument("u is not a vertex of the domain");
  std::vector<char> inB(nv, 0), ok(nv, 0);
  for (int v = 0; v < nv; ++v) {
    if (!dom.in_vertex(v)) {
      ok[v] = 1;
      continue;
    }
    for (int h : win.vertex_hex_ids(v))
      if (color(win.hex(h)) == 0) ok[v] = is_flower(w, h);
  }
  std::queue<int> q;
  for (int v = 0; v < nv; ++v)
    if (!dom.in_vertex(v)) {
      inB[v] = 1;
      q.push(v);
    }
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (int e : win.vertex_edges(a)) {
      if (e < 0) continue;
      int b = win.other_end(e, a);
      if (ok[b] && !inB[b]) {
        inB[b] = 1;
        q.push(b);
      }
    }
  }
  if (inB[u]) return std::nullopt;
  std::vector<char> seen(nv, 0);
  std::vector<int> comp{u};
  seen[u] = 1;
  for (std::size_t i = 0; i < comp.size(); ++i)
    for (int e : win.vertex_edges(comp[i])) {
      if (e < 0) continue;
      int b = win.other_end(e, comp[i]);
      if (!inB[b] && !seen[b]) {
        seen[b] = 1;
        comp.push_back(b);
      }
    }
  std::vector<HexVertex> hv;
  for (int v : comp) hv.push_back(win.vertex(v));
  return HexDomain::from_vertices(hv);
}

WeightGain weight_gain_check(const RepairReport& r, double n, double x) {
  if (n < 1 || !(n * std::pow(x, 6) >= 1)) throw std::invalid_argument("weight gain check needs n >= 1 and n x^6 >= 1");
  WeightGain g;
  if (std::isinf(x))
    g.lhs = r.d_o > 0 ? INFINITY : (r.d_o < 0 ? -INFINITY : r.d_L * std::log(n));
  else
    g.lhs = r.d_o * std::log(x) + r.d_L * std::log(n);
  g.rhs = r.V / 15.0 * std::log(n * std::min(std::pow(x, 6), 1.0));
  g.holds = g.lhs >= g.rhs - 1e-9;
  return g;
}

WeightGain weight_gain_check(const LoopConfig& w, double n, double x) {
  return weight_gain_check(repair_identities(w), n, x);
}

MapCountingReport map_counting_check(const std::vector<double>& prob, const std::vector<int>& E,
                                     const std::vector<int>& F, const std::function<int(int)>& T, double p, double q) {
  MapCountingReport r;
  std::vector<char> inF(prob.size(), 0);
  for (int f : F) inF[f] = 1;
  std::vector<int> pre(prob.size(), 0);
  r.hypotheses = true;
  for (int e : E) {
    int f = T(e);
    if (f < 0 || f >= (int)prob.size() || !inF[f] || prob[f] < p * prob[e] * (1 - 1e-12)) {
      r.hypotheses = false;
      r.first_violation = e;
      break;
    }
    if (++pre[f] > q) {
      r.hypotheses = false;
      r.first_violation = f;
      break;
    }
  }
  for (int e : E) r.prE += prob[e];
  for (int f : F) r.prF += prob[f];
  r.bound = q / p * r.prF;
  r.holds = r.hypotheses && r.prE <= r.bound * (1 + 1e-12);
  return r;
}

}  // namespace onlat
