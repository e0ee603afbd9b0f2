#pragma once
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace onlat {

// Hexagon of H (= vertex of the triangular lattice T). Integer pair (a,b)
// with a+b even; the centre sits at (sqrt3*a, b), neighbours are 2 apart.
struct Hex {
  int a = 0, b = 0;
  auto operator<=>(const Hex&) const = default;
  Hex operator+(const Hex& o) const { return {a + o.a, b + o.b}; }
  Hex operator-(const Hex& o) const { return {a - o.a, b - o.b}; }
};

// counterclockwise, starting at 30 degrees
inline constexpr std::array<Hex, 6> kHexDir = {{{1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}, {1, -1}}};

inline bool valid_hex(Hex h) { return ((h.a + h.b) & 1) == 0; }
// (0,0) in T^0, (0,2) in T^1
inline int color(Hex h) { return (((-h.b) % 3) + 3) % 3; }
inline Hex shift_up(Hex h) { return {h.a, h.b + 2}; }
inline Hex shift_down(Hex h) { return {h.a, h.b - 2}; }
inline Hex shift(Hex h, int k) { return {h.a, h.b + 2 * k}; }  // k times up
int hex_direction(Hex from, Hex to);  // index into kHexDir or -1
inline bool hex_adjacent(Hex p, Hex q) { return hex_direction(p, q) >= 0; }
int hex_dist(Hex p, Hex q);
std::array<double, 2> hex_center(Hex h);

// Edge of H, identified with its dual edge of T; p < q.
struct HexEdge {
  Hex p, q;
  auto operator<=>(const HexEdge&) const = default;
};
HexEdge make_edge(Hex x, Hex y);
HexEdge shift(const HexEdge& e, int k);

// Vertex of H = triangular face of T, canonical (base, type):
// type 0 = {h, h+(1,1), h+(0,2)}, type 1 = {h, h+(1,-1), h+(1,1)}.
struct HexVertex {
  Hex base;
  int type = 0;
  auto operator<=>(const HexVertex&) const = default;
};
HexVertex corner(Hex h, int i);  // triangle {h, h+dir[i], h+dir[i+1]}
HexVertex make_vertex(Hex x, Hex y, Hex z);
std::array<Hex, 3> vertex_hexes(const HexVertex& v);
std::array<HexVertex, 2> edge_endpoints(const HexEdge& e);
std::array<double, 2> vertex_pos(const HexVertex& v);
HexVertex shift(const HexVertex& v, int k);

// Dense index of a rectangular patch: hexes, and the vertices/edges of H
// whose hexagons all lie in the patch.
class HexWindow {
 public:
  HexWindow() = default;
  HexWindow(int a0, int a1, int b0, int b1);

  int num_hexes() const { return (int)hexes_.size(); }
  int num_vertices() const { return (int)verts_.size(); }
  int num_edges() const { return (int)edges_.size(); }

  bool contains(Hex h) const;
  int hex_index(Hex h) const;  // -1 outside
  int vertex_index(const HexVertex& v) const;
  int edge_index(Hex x, Hex y) const;
  int edge_index(const HexEdge& e) const { return edge_index(e.p, e.q); }

  Hex hex(int i) const { return hexes_[i]; }
  const HexVertex& vertex(int i) const { return verts_[i]; }
  const HexEdge& edge(int i) const { return edges_[i]; }

  const std::array<int, 2>& edge_vertices(int e) const { return edge_vert_[e]; }
  const std::array<int, 2>& edge_hexes(int e) const { return edge_hex_[e]; }
  const std::array<int, 3>& vertex_edges(int v) const { return vert_edge_[v]; }
  const std::array<int, 3>& vertex_hex_ids(int v) const { return vert_hex_[v]; }
  const std::array<int, 6>& hex_edges(int h) const { return hex_edge_[h]; }     // (h, h+dir[i])
  const std::array<int, 6>& hex_vertices(int h) const { return hex_vert_[h]; }  // corner i
  int other_end(int e, int v) const { return edge_vert_[e][0] == v ? edge_vert_[e][1] : edge_vert_[e][0]; }

  int a0() const { return a0_; }
  int a1() const { return a1_; }
  int b0() const { return b0_; }
  int b1() const { return b1_; }

 private:
  int a0_ = 0, a1_ = -1, b0_ = 0, b1_ = -1, wb_ = 0;
  std::vector<int> cell_;  // cell -> hex id
  std::vector<Hex> hexes_;
  std::vector<int> vid_;  // hex*2+type -> vertex id
  std::vector<int> eid_;  // hex*3+k -> edge id (k<3)
  std::vector<HexVertex> verts_;
  std::vector<HexEdge> edges_;
  std::vector<std::array<int, 2>> edge_vert_, edge_hex_;
  std::vector<std::array<int, 3>> vert_edge_, vert_hex_;
  std::vector<std::array<int, 6>> hex_edge_, hex_vert_;
};

// Simple closed path in T, stored without the repeated endpoint.
struct Circuit {
  std::vector<Hex> hexes;
  void validate() const;  // throws std::invalid_argument
  std::vector<HexEdge> star() const;  // gamma*
  bool avoids_color(int c) const;
  // counterclockwise, starting from the smallest hexagon
  Circuit normalized() const;
  bool operator==(const Circuit& o) const { return normalized().hexes == o.normalized().hexes; }
};

// Int(gamma) with its enclosing circuit, on a window with margin.
class HexDomain {
 public:
  static HexDomain from_circuit(const Circuit& c, int margin = 3);
  static HexDomain from_vertices(const std::vector<HexVertex>& vs, int margin = 3);
  static HexDomain from_hexagons(const std::vector<Hex>& hs, int margin = 3);

  const HexWindow& win() const { return win_; }
  const Circuit& circuit() const { return circ_; }

  bool in_vertex(int v) const { return vin_[v]; }
  bool in_edge(int e) const { return ein_[e]; }
  bool in_hex(int h) const { return hin_[h]; }  // all six edges in E(H)
  bool star_edge(int e) const { return estar_[e]; }

  const std::vector<int>& vertices() const { return vlist_; }
  const std::vector<int>& edges() const { return elist_; }
  const std::vector<int>& hexes() const { return hlist_; }
  const std::vector<int>& star_edges() const { return slist_; }
  std::vector<int> boundary_vertices() const;  // vertex boundary of V(H)

  bool is_type(int c) const { return circ_.avoids_color(c); }
  int center_vertex() const;  // vertex closest to the centroid

  std::vector<HexVertex> vertex_set() const;
  std::vector<HexEdge> edge_set() const;
  std::vector<Hex> hex_set() const;

 private:
  HexWindow win_;
  Circuit circ_;
  std::vector<char> vin_, ein_, hin_, estar_;
  std::vector<int> vlist_, elist_, hlist_, slist_;
};

Circuit enclosing_circuit(const std::vector<HexVertex>& vs);

// region helpers
std::vector<Hex> hexes_within(Hex centre, int radius);
std::vector<Hex> hexes_in_rect(int width, int height);  // a in [0,w), b in [0,2h)
std::vector<Hex> only_color(const std::vector<Hex>& hs, int c);
// "hex(R)", "rect(W,H)", "tri3", "single"; type0 keeps only T^0 hexagons
HexDomain make_domain(const std::string& spec, bool type0);

}  // namespace onlat
