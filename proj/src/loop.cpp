#include "onlat/loop.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <queue>

namespace onlat {

LoopConfig::LoopConfig(const HexDomain& d) : dom_(&d), on_(d.win().num_edges(), 0) {}

void LoopConfig::set(int e, bool v) {
  if (on_[e] == v) return;
  if (v && !dom_->in_edge(e)) throw std::invalid_argument("edge is not an edge of the domain");
  on_[e] = v;
  o_ += v ? 1 : -1;
}

int LoopConfig::degree(int v) const {
  int d = 0;
  for (int e : win().vertex_edges(v))
    if (e >= 0 && on_[e]) ++d;
  return d;
}

std::vector<int> LoopConfig::edges() const {
  std::vector<int> r;
  for (int e = 0; e < (int)on_.size(); ++e)
    if (on_[e]) r.push_back(e);
  return r;
}

std::vector<HexEdge> LoopConfig::hex_edges() const {
  std::vector<HexEdge> r;
  for (int e : edges()) r.push_back(win().edge(e));
  return r;
}

LoopConfig validate(const HexDomain& d, const std::vector<HexEdge>& edges) {
  LoopConfig w(d);
  for (auto& he : edges) {
    int e = d.win().edge_index(he);
    if (e < 0 || !d.in_edge(e)) throw std::invalid_argument("edge is not an edge of the domain");
    if (w.has(e)) throw std::invalid_argument("duplicate edge");
    w.set(e, true);
  }
  std::vector<HexVertex> odd;
  for (int v : d.vertices())
    if (w.degree(v) % 2) odd.push_back(d.win().vertex(v));
  if (!odd.empty()) throw OddDegreeError("configuration has " + std::to_string(odd.size()) + " odd-degree vertices", odd);
  return w;
}

namespace {

Loop trace(const LoopConfig& w, int start, int first_edge) {
  const HexWindow& win = w.win();
  Loop l;
  int v = start, e = first_edge;
  while (true) {
    l.vertices.push_back(v);
    l.edges.push_back(e);
    v = win.other_end(e, v);
    if (v == start) break;
    int nxt = -1;
    for (int f : win.vertex_edges(v))
      if (f >= 0 && f != e && w.has(f)) nxt = f;
    if (nxt < 0) throw std::logic_error("dangling path while tracing a loop");
    e = nxt;
  }
  return l;
}

}  // namespace

std::vector<Loop> decompose(const LoopConfig& w) {
  const HexWindow& win = w.win();
  std::vector<HexVertex> odd;
  for (int v : w.domain().vertices())
    if (w.degree(v) % 2) odd.push_back(win.vertex(v));
  if (!odd.empty()) throw OddDegreeError("configuration has odd-degree vertices", odd);
  std::vector<char> seen(win.num_edges(), 0);
  std::vector<Loop> r;
  for (int e : w.edges()) {
    if (seen[e]) continue;
    Loop l = trace(w, win.edge_vertices(e)[0], e);
    for (int f : l.edges) seen[f] = 1;
    r.push_back(std::move(l));
  }
  return r;
}

int count_loops(const LoopConfig& w) { return (int)decompose(w).size(); }

Loop loop_through(const LoopConfig& w, int v) {
  if (w.degree(v) != 2) throw std::invalid_argument("vertex is not on a loop");
  for (int e : w.win().vertex_edges(v))
    if (e >= 0 && w.has(e)) return trace(w, v, e);
  throw std::logic_error("unreachable");
}

LoopWeight loop_weight(int o, int L, double n, double x) {
  if (n <= 0) throw std::invalid_argument("n must be positive");
  if (!(x > 0)) throw std::invalid_argument("x must be positive");
  LoopWeight r;
  r.o = o;
  r.L = L;
  r.infinite_x = std::isinf(x);
  r.log_value = L * std::log(n) + (r.infinite_x ? 0.0 : o * std::log(x));
  return r;
}

LoopWeight loop_weight(const LoopConfig& w, double n, double x) { return loop_weight(w.o(), count_loops(w), n, x); }

bool operator<(const LoopWeight& a, const LoopWeight& b) {
  if (a.infinite_x && a.o != b.o) return a.o < b.o;
  return a.log_value < b.log_value;
}

// ---------------------------------------------------------------- surrounding

// Walk from u into one of its hexagons, then straight up through hexagon
// centres to the window border; the loop surrounds u iff it crosses an odd
// number of times (or passes through u).
static std::vector<int> ray_edges(const HexWindow& win, int u) {
  std::vector<int> r;
  Hex h = win.hex(win.vertex_hex_ids(u)[0]);
  while (win.contains(shift_up(h))) {
    r.push_back(win.edge_index(h, shift_up(h)));
    h = shift_up(h);
  }
  return r;
}

bool surrounds(const HexWindow& win, const Loop& l, int u) {
  if (std::find(l.vertices.begin(), l.vertices.end(), u) != l.vertices.end()) return true;
  std::vector<int> es = l.edges;
  std::sort(es.begin(), es.end());
  int cnt = 0;
  for (int e : ray_edges(win, u))
    if (std::binary_search(es.begin(), es.end(), e)) ++cnt;
  return cnt % 2 == 1;
}

std::vector<SurroundingLoop> loops_surrounding(const LoopConfig& w, int u) {
  auto ls = decompose(w);
  const HexWindow& win = w.win();
  std::vector<int> id(win.num_edges(), -1);
  for (int i = 0; i < (int)ls.size(); ++i)
    for (int e : ls[i].edges) id[e] = i;
  std::vector<int> par(ls.size(), 0);
  for (int e : ray_edges(win, u))
    if (id[e] >= 0) par[id[e]] ^= 1;
  for (int e : win.vertex_edges(u))
    if (e >= 0 && id[e] >= 0) par[id[e]] = 1;
  std::vector<SurroundingLoop> r;
  for (int i = 0; i < (int)ls.size(); ++i)
    if (par[i]) r.push_back({i, ls[i].length()});
  return r;
}

bool is_flower(const LoopConfig& w, int h) {
  for (int e : w.win().hex_edges(h))
    if (e < 0 || !w.has(e)) return false;
  return true;
}

namespace {

bool allowed(const LoopConfig& w, int v, Connectivity mode, int c) {
  if (mode == Connectivity::Loop) return w.degree(v) == 2;
  for (int h : w.win().vertex_hex_ids(v))
    if (color(w.win().hex(h)) == c) return is_flower(w, h);
  return false;
}

// BFS over allowed vertices from u; stops when target(v) holds
template <class F>
bool explore(const LoopConfig& w, int u, Connectivity mode, int c, F target) {
  const HexWindow& win = w.win();
  if (!allowed(w, u, mode, c)) return false;
  std::vector<char> seen(win.num_vertices(), 0);
  std::queue<int> q;
  q.push(u);
  seen[u] = 1;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    if (target(a)) return true;
    for (int e : win.vertex_edges(a)) {
      if (e < 0) continue;
      int b = win.other_end(e, a);
      if (!seen[b] && allowed(w, b, mode, c)) {
        seen[b] = 1;
        q.push(b);
      }
    }
  }
  return false;
}

}  // namespace

bool connected(const LoopConfig& w, int u, int v, Connectivity mode, int c) {
  if (!allowed(w, v, mode, c)) return false;
  return explore(w, u, mode, c, [v](int a) { return a == v; });
}

bool connected_to_boundary(const LoopConfig& w, int u, Connectivity mode, int c) {
  std::vector<char> bd(w.win().num_vertices(), 0);
  for (int v : w.domain().boundary_vertices()) bd[v] = 1;
  return explore(w, u, mode, c, [&](int a) { return bd[a] != 0; });
}

// ---------------------------------------------------------------- enumeration

namespace {

struct SmallGraph {
  int nv = 0;
  std::vector<std::array<int, 2>> ends;  // per domain edge bit, local vertex ids
  std::vector<std::vector<int>> inc;     // vertex -> edge bits
};

SmallGraph small_graph(const HexDomain& d) {
  SmallGraph g;
  std::map<int, int> loc;
  for (int v : d.vertices()) loc[v] = g.nv++;
  g.inc.resize(g.nv);
  for (int i = 0; i < (int)d.edges().size(); ++i) {
    auto& ev = d.win().edge_vertices(d.edges()[i]);
    int a = loc.at(ev[0]), b = loc.at(ev[1]);
    g.ends.push_back({a, b});
    g.inc[a].push_back(i);
    g.inc[b].push_back(i);
  }
  return g;
}

// number of non-trivial components; all degrees must be even (so each is a cycle)
int cycles_in(const SmallGraph& g, std::uint64_t m) {
  std::vector<int> par(g.nv);
  for (int i = 0; i < g.nv; ++i) par[i] = i;
  auto find = [&](int a) {
    while (par[a] != a) a = par[a] = par[par[a]];
    return a;
  };
  int comps = 0;
  std::vector<char> touched(g.nv, 0);
  for (int i = 0; i < (int)g.ends.size(); ++i) {
    if (!((m >> i) & 1)) continue;
    int a = g.ends[i][0], b = g.ends[i][1];
    if (!touched[a]) {
      touched[a] = 1;
      ++comps;
    }
    if (!touched[b]) {
      touched[b] = 1;
      ++comps;
    }
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      par[ra] = rb;
      --comps;
    }
  }
  return comps;
}

void simple_paths(const SmallGraph& g, std::uint64_t m, int a, int t, std::vector<char>& used, std::vector<int>& path,
                  std::vector<std::vector<int>>& out) {
  if (a == t) {
    out.push_back(path);
    return;
  }
  used[a] = 1;
  for (int e : g.inc[a]) {
    if (!((m >> e) & 1)) continue;
    int b = g.ends[e][0] == a ? g.ends[e][1] : g.ends[e][0];
    if (used[b]) continue;
    path.push_back(e);
    simple_paths(g, m, b, t, used, path, out);
    path.pop_back();
  }
  used[a] = 0;
}

std::vector<std::uint64_t> face_masks(const HexDomain& d) {
  std::map<int, int> bit;
  for (int i = 0; i < (int)d.edges().size(); ++i) bit[d.edges()[i]] = i;
  std::vector<std::uint64_t> r;
  for (int h : d.hexes()) {
    std::uint64_t m = 0;
    for (int e : d.win().hex_edges(h)) m |= 1ull << bit.at(e);
    r.push_back(m);
  }
  return r;
}

void check_cap(const HexDomain& d, int cap) {
  if (cap > 64) throw std::invalid_argument("enumeration cap above 64 edges");
  if ((int)d.edges().size() > cap)
    throw std::invalid_argument("domain has " + std::to_string(d.edges().size()) + " edges, above the cap " +
                                std::to_string(cap));
}

}  // namespace

LoopEnumeration enumerate_loops(const HexDomain& d, int cap) {
  check_cap(d, cap);
  auto g = small_graph(d);
  auto faces = face_masks(d);
  LoopEnumeration r;
  r.dom = &d;
  std::size_t N = std::size_t(1) << faces.size();
  r.states.reserve(N);
  // faces generate the cycle space of a simply connected domain: Gray-code walk
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) m ^= faces[std::countr_zero(i)];
    LoopState s;
    s.mask = m;
    s.o = std::popcount(m);
    s.L = cycles_in(g, m);
    r.states.push_back(s);
  }
  return r;
}

LoopEnumeration enumerate_odd(const HexDomain& d, int u, int v, int cap) {
  check_cap(d, cap);
  if (u == v) throw std::invalid_argument("u and v must differ");
  if (!d.in_vertex(u) || !d.in_vertex(v)) throw std::invalid_argument("u, v must be vertices of the domain");
  auto g = small_graph(d);
  std::map<int, int> loc;
  for (int i = 0; i < (int)d.vertices().size(); ++i) loc[d.vertices()[i]] = i;
  int lu = loc.at(u), lv = loc.at(v);
  // one u-v path by BFS
  std::vector<int> pe(g.nv, -1);
  std::vector<char> seen(g.nv, 0);
  std::queue<int> q;
  q.push(lu);
  seen[lu] = 1;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (int e : g.inc[a]) {
      int b = g.ends[e][0] == a ? g.ends[e][1] : g.ends[e][0];
      if (!seen[b]) {
        seen[b] = 1;
        pe[b] = e;
        q.push(b);
      }
    }
  }
  std::uint64_t base = 0;
  for (int a = lv; a != lu;) {
    int e = pe[a];
    base ^= 1ull << e;
    a = g.ends[e][0] == a ? g.ends[e][1] : g.ends[e][0];
  }
  auto faces = face_masks(d);
  LoopEnumeration r;
  r.dom = &d;
  r.odd = true;
  r.u = u;
  r.v = v;
  std::size_t N = std::size_t(1) << faces.size();
  std::uint64_t m = base;
  std::vector<char> used(g.nv, 0);
  for (std::size_t i = 0; i < N; ++i) {
    if (i) m ^= faces[std::countr_zero(i)];
    LoopState s;
    s.mask = m;
    s.o = std::popcount(m);
    std::vector<std::vector<int>> paths;
    std::vector<int> path;
    simple_paths(g, m, lu, lv, used, path, paths);
    if (paths.empty()) throw std::logic_error("odd configuration without a u-v path");
    std::vector<int> lp;
    for (auto& p : paths) {
      std::uint64_t pm = 0;
      for (int e : p) pm |= 1ull << e;
      lp.push_back(cycles_in(g, m & ~pm));
    }
    std::size_t best = std::min_element(paths.begin(), paths.end()) - paths.begin();
    s.L = lp[best];
    s.path_independent = std::all_of(lp.begin(), lp.end(), [&](int x) { return x == lp[0]; });
    // three internally vertex-disjoint paths
    auto inner = [&](const std::vector<int>& p) {
      std::vector<int> vs;
      int a = lu;
      for (int e : p) {
        a = g.ends[e][0] == a ? g.ends[e][1] : g.ends[e][0];
        if (a != lv) vs.push_back(a);
      }
      std::sort(vs.begin(), vs.end());
      return vs;
    };
    std::vector<std::vector<int>> iv;
    for (auto& p : paths) iv.push_back(inner(p));
    auto disjoint = [&](std::size_t a, std::size_t b) {
      std::vector<int> t;
      std::set_intersection(iv[a].begin(), iv[a].end(), iv[b].begin(), iv[b].end(), std::back_inserter(t));
      return t.empty() && paths[a] != paths[b];
    };
    for (std::size_t a = 0; a < paths.size() && !s.three_paths; ++a)
      for (std::size_t b = a + 1; b < paths.size() && !s.three_paths; ++b) {
        if (!disjoint(a, b)) continue;
        for (std::size_t c = b + 1; c < paths.size(); ++c)
          if (disjoint(a, c) && disjoint(b, c)) {
            s.three_paths = true;
            break;
          }
      }
    r.states.push_back(s);
  }
  return r;
}

double LoopEnumeration::partition(double n, double x) const {
  bool inf = std::isinf(x);
  int omax = 0;
  for (auto& s : states) omax = std::max(omax, s.o);
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> lw;
  for (auto& s : states) {
    if (inf && s.o != omax) continue;
    double l = s.L * std::log(n) + (inf ? 0.0 : s.o * std::log(x)) + std::log(J(s, n));
    lw.push_back(l);
    lmax = std::max(lmax, l);
  }
  double acc = 0;
  for (double l : lw) acc += std::exp(l - lmax);
  return std::exp(lmax) * acc;
}

std::vector<double> LoopEnumeration::probabilities(double n, double x) const {
  if (odd) throw std::logic_error("probabilities are defined for even parity only");
  bool inf = std::isinf(x);
  int omax = 0;
  for (auto& s : states) omax = std::max(omax, s.o);
  std::vector<double> lw(states.size());
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& s = states[i];
    if (inf && s.o != omax) {
      lw[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    lw[i] = s.L * std::log(n) + (inf ? 0.0 : s.o * std::log(x));
    lmax = std::max(lmax, lw[i]);
  }
  double tot = 0;
  for (auto& l : lw) {
    l = std::exp(l - lmax);
    tot += l;
  }
  for (auto& l : lw) l /= tot;
  return lw;
}

LoopConfig LoopEnumeration::config(std::size_t i) const {
  LoopConfig w(*dom);
  for (int b = 0; b < (int)dom->edges().size(); ++b)
    if ((states[i].mask >> b) & 1) w.set(dom->edges()[b], true);
  return w;
}

std::uint64_t LoopEnumeration::mask_of(const LoopConfig& w) const {
  std::uint64_t m = 0;
  for (int b = 0; b < (int)dom->edges().size(); ++b)
    if (w.has(dom->edges()[b])) m |= 1ull << b;
  return m;
}

// ---------------------------------------------------------------- constants

double critical_x(double n) {
  if (!(n >= 0 && n <= 2)) throw std::invalid_argument("critical_x is defined for 0 <= n <= 2");
  return 1.0 / std::sqrt(2.0 + std::sqrt(2.0 - n));
}

double hard_hexagon_lambda_c() { return (11.0 + 5.0 * std::sqrt(5.0)) / 2.0; }

double hexagonal_connective_constant() { return std::sqrt(2.0 + std::sqrt(2.0)); }

TurnCount loop_turns(const HexWindow& win, const Loop& l) {
  int m = (int)l.vertices.size();
  std::vector<std::array<double, 2>> p;
  for (int v : l.vertices) p.push_back(vertex_pos(win.vertex(v)));
  double area = 0;
  for (int i = 0; i < m; ++i) area += p[i][0] * p[(i + 1) % m][1] - p[(i + 1) % m][0] * p[i][1];
  if (area < 0) std::reverse(p.begin(), p.end());
  TurnCount t;
  for (int i = 0; i < m; ++i) {
    auto& a = p[(i + m - 1) % m];
    auto& b = p[i];
    auto& c = p[(i + 1) % m];
    double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (cr > 0)
      ++t.left;
    else
      ++t.right;
  }
  return t;
}

}  // namespace onlat
