#include "onlat/hex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <queue>
#include <regex>
#include <set>
#include <stdexcept>

namespace onlat {

int hex_direction(Hex from, Hex to) {
  Hex d = to - from;
  for (int i = 0; i < 6; ++i)
    if (kHexDir[i] == d) return i;
  return -1;
}

int hex_dist(Hex p, Hex q) {
  int da = std::abs(q.a - p.a), db = std::abs(q.b - p.b);
  return da + std::max(0, (db - da) / 2);
}

std::array<double, 2> hex_center(Hex h) { return {std::sqrt(3.0) * h.a, (double)h.b}; }

HexEdge make_edge(Hex x, Hex y) {
  if (!hex_adjacent(x, y)) throw std::invalid_argument("hexagons not adjacent");
  return x < y ? HexEdge{x, y} : HexEdge{y, x};
}

HexEdge shift(const HexEdge& e, int k) { return make_edge(shift(e.p, k), shift(e.q, k)); }

HexVertex make_vertex(Hex x, Hex y, Hex z) {
  std::array<Hex, 3> t{x, y, z};
  std::sort(t.begin(), t.end());
  if (!hex_adjacent(t[0], t[1]) || !hex_adjacent(t[1], t[2]) || !hex_adjacent(t[0], t[2]))
    throw std::invalid_argument("not a triangle of T");
  return {t[0], t[1].a == t[0].a ? 0 : 1};
}

HexVertex corner(Hex h, int i) {
  i = ((i % 6) + 6) % 6;
  return make_vertex(h, h + kHexDir[i], h + kHexDir[(i + 1) % 6]);
}

std::array<Hex, 3> vertex_hexes(const HexVertex& v) {
  if (v.type == 0) return {v.base, v.base + kHexDir[0], v.base + kHexDir[1]};
  return {v.base, v.base + kHexDir[5], v.base + kHexDir[0]};
}

std::array<HexVertex, 2> edge_endpoints(const HexEdge& e) {
  int i = hex_direction(e.p, e.q);
  if (i < 0) throw std::invalid_argument("bad edge");
  return {make_vertex(e.p, e.q, e.p + kHexDir[(i + 5) % 6]), make_vertex(e.p, e.q, e.p + kHexDir[(i + 1) % 6])};
}

std::array<double, 2> vertex_pos(const HexVertex& v) {
  auto hs = vertex_hexes(v);
  double x = 0, y = 0;
  for (auto& h : hs) {
    auto c = hex_center(h);
    x += c[0];
    y += c[1];
  }
  return {x / 3, y / 3};
}

HexVertex shift(const HexVertex& v, int k) { return {shift(v.base, k), v.type}; }

// ---------------------------------------------------------------- window

HexWindow::HexWindow(int a0, int a1, int b0, int b1) : a0_(a0), a1_(a1), b0_(b0), b1_(b1) {
  if (a1 < a0 || b1 < b0) throw std::invalid_argument("empty window");
  wb_ = b1 - b0 + 1;
  cell_.assign((size_t)(a1 - a0 + 1) * wb_, -1);
  for (int a = a0; a <= a1; ++a)
    for (int b = b0; b <= b1; ++b)
      if (valid_hex({a, b})) {
        cell_[(size_t)(a - a0) * wb_ + (b - b0)] = (int)hexes_.size();
        hexes_.push_back({a, b});
      }
  int nh = num_hexes();
  vid_.assign(2 * nh, -1);
  eid_.assign(3 * nh, -1);
  for (int h = 0; h < nh; ++h)
    for (int t = 0; t < 2; ++t) {
      HexVertex v{hexes_[h], t};
      auto hs = vertex_hexes(v);
      if (!contains(hs[1]) || !contains(hs[2])) continue;
      vid_[2 * h + t] = (int)verts_.size();
      verts_.push_back(v);
      vert_hex_.push_back({h, hex_index(hs[1]), hex_index(hs[2])});
    }
  for (int h = 0; h < nh; ++h)
    for (int k = 0; k < 3; ++k) {
      Hex q = hexes_[h] + kHexDir[k];
      if (!contains(q)) continue;
      HexEdge e = make_edge(hexes_[h], q);
      auto ends = edge_endpoints(e);
      int v0 = vertex_index(ends[0]), v1 = vertex_index(ends[1]);
      if (v0 < 0 || v1 < 0) continue;
      eid_[3 * h + k] = (int)edges_.size();
      edges_.push_back(e);
      edge_vert_.push_back({v0, v1});
      edge_hex_.push_back({h, hex_index(q)});
    }
  vert_edge_.assign(verts_.size(), {-1, -1, -1});
  for (int v = 0; v < num_vertices(); ++v) {
    auto& hh = vert_hex_[v];
    vert_edge_[v] = {edge_index(hexes_[hh[0]], hexes_[hh[1]]), edge_index(hexes_[hh[1]], hexes_[hh[2]]),
                     edge_index(hexes_[hh[0]], hexes_[hh[2]])};
  }
  hex_edge_.assign(nh, {-1, -1, -1, -1, -1, -1});
  hex_vert_.assign(nh, {-1, -1, -1, -1, -1, -1});
  for (int h = 0; h < nh; ++h)
    for (int i = 0; i < 6; ++i) {
      Hex q = hexes_[h] + kHexDir[i];
      if (contains(q)) hex_edge_[h][i] = edge_index(hexes_[h], q);
      Hex r = hexes_[h] + kHexDir[(i + 1) % 6];
      if (contains(q) && contains(r)) hex_vert_[h][i] = vertex_index(corner(hexes_[h], i));
    }
}

bool HexWindow::contains(Hex h) const {
  return valid_hex(h) && h.a >= a0_ && h.a <= a1_ && h.b >= b0_ && h.b <= b1_;
}

int HexWindow::hex_index(Hex h) const {
  if (!contains(h)) return -1;
  return cell_[(size_t)(h.a - a0_) * wb_ + (h.b - b0_)];
}

int HexWindow::vertex_index(const HexVertex& v) const {
  int h = hex_index(v.base);
  if (h < 0) return -1;
  return vid_[2 * h + v.type];
}

int HexWindow::edge_index(Hex x, Hex y) const {
  int i = hex_direction(x, y);
  if (i < 0) return -1;
  if (i >= 3) {
    std::swap(x, y);
    i -= 3;
  }
  int h = hex_index(x);
  if (h < 0 || !contains(y)) return -1;
  return eid_[3 * h + i];
}

// ---------------------------------------------------------------- circuit

void Circuit::validate() const {
  int m = (int)hexes.size();
  if (m < 3) throw std::invalid_argument("circuit needs length >= 3");
  std::set<Hex> seen;
  for (int i = 0; i < m; ++i) {
    if (!valid_hex(hexes[i])) throw std::invalid_argument("invalid hexagon coordinates");
    if (!seen.insert(hexes[i]).second) throw std::invalid_argument("circuit repeats a hexagon");
    if (!hex_adjacent(hexes[i], hexes[(i + 1) % m])) throw std::invalid_argument("circuit steps between non-adjacent hexagons");
  }
}

std::vector<HexEdge> Circuit::star() const {
  std::vector<HexEdge> r;
  int m = (int)hexes.size();
  for (int i = 0; i < m; ++i) r.push_back(make_edge(hexes[i], hexes[(i + 1) % m]));
  return r;
}

bool Circuit::avoids_color(int c) const {
  for (auto& h : hexes)
    if (color(h) == c) return false;
  return true;
}

Circuit Circuit::normalized() const {
  Circuit r = *this;
  int m = (int)r.hexes.size();
  if (m == 0) return r;
  double area = 0;
  for (int i = 0; i < m; ++i) {
    auto p = hex_center(r.hexes[i]), q = hex_center(r.hexes[(i + 1) % m]);
    area += p[0] * q[1] - q[0] * p[1];
  }
  if (area < 0) std::reverse(r.hexes.begin(), r.hexes.end());
  auto it = std::min_element(r.hexes.begin(), r.hexes.end());
  std::rotate(r.hexes.begin(), it, r.hexes.end());
  return r;
}

// ---------------------------------------------------------------- domain

static HexWindow window_around(const std::vector<Hex>& hs, int margin) {
  int a0 = hs[0].a, a1 = a0, b0 = hs[0].b, b1 = b0;
  for (auto& h : hs) {
    a0 = std::min(a0, h.a);
    a1 = std::max(a1, h.a);
    b0 = std::min(b0, h.b);
    b1 = std::max(b1, h.b);
  }
  return HexWindow(a0 - margin, a1 + margin, b0 - 2 * margin, b1 + 2 * margin);
}

HexDomain HexDomain::from_circuit(const Circuit& c, int margin) {
  c.validate();
  if (margin < 2) margin = 2;
  HexDomain d;
  d.circ_ = c;
  d.win_ = window_around(c.hexes, margin);
  const HexWindow& w = d.win_;
  int nv = w.num_vertices(), ne = w.num_edges(), nh = w.num_hexes();
  d.estar_.assign(ne, 0);
  for (auto& e : c.star()) {
    int id = w.edge_index(e);
    if (id < 0) throw std::logic_error("circuit edge outside window");
    d.estar_[id] = 1;
    d.slist_.push_back(id);
  }
  // flood the exterior from a window corner
  std::vector<char> ext(nv, 0);
  std::queue<int> q;
  q.push(0);
  ext[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : w.vertex_edges(v)) {
      if (e < 0 || d.estar_[e]) continue;
      int u = w.other_end(e, v);
      if (!ext[u]) {
        ext[u] = 1;
        q.push(u);
      }
    }
  }
  d.vin_.assign(nv, 0);
  for (int v = 0; v < nv; ++v)
    if (!ext[v]) {
      d.vin_[v] = 1;
      d.vlist_.push_back(v);
    }
  if (d.vlist_.empty()) throw std::invalid_argument("circuit encloses nothing");
  // interior must be one component
  {
    std::vector<char> seen(nv, 0);
    std::queue<int> qq;
    qq.push(d.vlist_[0]);
    seen[d.vlist_[0]] = 1;
    size_t cnt = 1;
    while (!qq.empty()) {
      int v = qq.front();
      qq.pop();
      for (int e : w.vertex_edges(v)) {
        if (e < 0) continue;
        int u = w.other_end(e, v);
        if (d.vin_[u] && !seen[u]) {
          seen[u] = 1;
          ++cnt;
          qq.push(u);
        }
      }
    }
    if (cnt != d.vlist_.size()) throw std::invalid_argument("interior of circuit is not connected");
  }
  d.ein_.assign(ne, 0);
  for (int e = 0; e < ne; ++e) {
    auto& ev = w.edge_vertices(e);
    if (d.vin_[ev[0]] && d.vin_[ev[1]]) {
      d.ein_[e] = 1;
      d.elist_.push_back(e);
    }
    if (d.vin_[ev[0]] != d.vin_[ev[1]] && !d.estar_[e]) throw std::logic_error("edge crosses circuit outside gamma*");
  }
  d.hin_.assign(nh, 0);
  for (int h = 0; h < nh; ++h) {
    bool all = true;
    for (int v : w.hex_vertices(h))
      if (v < 0 || !d.vin_[v]) all = false;
    if (all) {
      d.hin_[h] = 1;
      d.hlist_.push_back(h);
    }
  }
  return d;
}

Circuit enclosing_circuit(const std::vector<HexVertex>& vs) {
  if (vs.empty()) throw std::invalid_argument("empty vertex set");
  std::vector<Hex> hs;
  for (auto& v : vs)
    for (auto& h : vertex_hexes(v)) hs.push_back(h);
  HexWindow w = window_around(hs, 2);
  std::vector<char> in(w.num_vertices(), 0);
  for (auto& v : vs) in[w.vertex_index(v)] = 1;
  std::map<Hex, std::vector<Hex>> nb;
  for (int v = 0; v < w.num_vertices(); ++v) {
    if (!in[v]) continue;
    for (int e : w.vertex_edges(v)) {
      if (e < 0) throw std::logic_error("vertex at window border");
      if (in[w.other_end(e, v)]) continue;
      const HexEdge& he = w.edge(e);
      nb[he.p].push_back(he.q);
      nb[he.q].push_back(he.p);
    }
  }
  for (auto& [h, l] : nb)
    if (l.size() != 2) throw std::invalid_argument("vertex set is not a domain (boundary not a simple circuit)");
  Circuit c;
  Hex start = nb.begin()->first, prev = start, cur = nb[start][0];
  c.hexes.push_back(start);
  while (!(cur == start)) {
    c.hexes.push_back(cur);
    auto& l = nb[cur];
    Hex nxt = (l[0] == prev) ? l[1] : l[0];
    prev = cur;
    cur = nxt;
    if (c.hexes.size() > nb.size()) throw std::invalid_argument("boundary does not close");
  }
  if (c.hexes.size() != nb.size()) throw std::invalid_argument("vertex set is not a domain (several boundary circuits)");
  return c.normalized();
}

HexDomain HexDomain::from_vertices(const std::vector<HexVertex>& vs, int margin) {
  Circuit c = enclosing_circuit(vs);
  HexDomain d = from_circuit(c, margin);
  std::set<HexVertex> a(vs.begin(), vs.end());
  auto b = d.vertex_set();
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin()))
    throw std::invalid_argument("vertex set is not a domain (has holes)");
  return d;
}

HexDomain HexDomain::from_hexagons(const std::vector<Hex>& hs, int margin) {
  std::set<HexVertex> vs;
  for (auto& h : hs)
    for (int i = 0; i < 6; ++i) vs.insert(corner(h, i));
  return from_vertices(std::vector<HexVertex>(vs.begin(), vs.end()), margin);
}

std::vector<int> HexDomain::boundary_vertices() const {
  std::vector<int> r;
  for (int v : vlist_) {
    bool b = false;
    for (int e : win_.vertex_edges(v))
      if (e >= 0 && !vin_[win_.other_end(e, v)]) b = true;
    if (b) r.push_back(v);
  }
  return r;
}

int HexDomain::center_vertex() const {
  double cx = 0, cy = 0;
  for (int v : vlist_) {
    auto p = vertex_pos(win_.vertex(v));
    cx += p[0];
    cy += p[1];
  }
  cx /= vlist_.size();
  cy /= vlist_.size();
  int best = vlist_[0];
  double bd = 1e300;
  for (int v : vlist_) {
    auto p = vertex_pos(win_.vertex(v));
    double dd = (p[0] - cx) * (p[0] - cx) + (p[1] - cy) * (p[1] - cy);
    if (dd < bd - 1e-9) {
      bd = dd;
      best = v;
    }
  }
  return best;
}

std::vector<HexVertex> HexDomain::vertex_set() const {
  std::vector<HexVertex> r;
  for (int v : vlist_) r.push_back(win_.vertex(v));
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<HexEdge> HexDomain::edge_set() const {
  std::vector<HexEdge> r;
  for (int e : elist_) r.push_back(win_.edge(e));
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<Hex> HexDomain::hex_set() const {
  std::vector<Hex> r;
  for (int h : hlist_) r.push_back(win_.hex(h));
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<Hex> hexes_within(Hex c, int radius) {
  std::vector<Hex> r;
  for (int a = c.a - radius; a <= c.a + radius; ++a)
    for (int b = c.b - 2 * radius; b <= c.b + 2 * radius; ++b) {
      Hex h{a, b};
      if (valid_hex(h) && hex_dist(c, h) <= radius) r.push_back(h);
    }
  return r;
}

std::vector<Hex> hexes_in_rect(int width, int height) {
  std::vector<Hex> r;
  for (int a = 0; a < width; ++a)
    for (int b = 0; b < 2 * height; ++b)
      if (valid_hex({a, b})) r.push_back({a, b});
  return r;
}

std::vector<Hex> only_color(const std::vector<Hex>& hs, int c) {
  std::vector<Hex> r;
  for (auto& h : hs)
    if (color(h) == c) r.push_back(h);
  return r;
}

HexDomain make_domain(const std::string& spec, bool type0) {
  std::smatch m;
  std::vector<Hex> hs;
  if (std::regex_match(spec, m, std::regex(R"(\s*hex\(\s*(\d+)\s*\)\s*)"))) {
    hs = hexes_within({0, 0}, std::stoi(m[1]));
  } else if (std::regex_match(spec, m, std::regex(R"(\s*rect\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)"))) {
    hs = hexes_in_rect(std::stoi(m[1]), std::stoi(m[2]));
  } else if (spec == "tri3") {
    hs = {{0, 0}, {1, 1}, {0, 2}};
  } else if (spec == "single") {
    hs = {{0, 0}};
  } else {
    throw std::invalid_argument("unknown domain spec: " + spec);
  }
  if (type0) hs = only_color(hs, 0);
  if (hs.empty()) throw std::invalid_argument("domain has no hexagons");
  return HexDomain::from_hexagons(hs);
}

}  // namespace onlat
