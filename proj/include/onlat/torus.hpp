#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace onlat {

// Simple undirected graph; edges unique, no loops.
struct Graph {
  int nv = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj;       // neighbor vertices
  std::vector<std::vector<int>> adj_edge;  // matching edge ids

  Graph() = default;
  explicit Graph(int n) : nv(n), adj(n), adj_edge(n) {}
  int add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  int ne() const { return (int)edges.size(); }
  // stable string used for cache keys
  std::string canonical() const;
};

Graph cycle_graph(int n);
Graph path_graph(int n);
Graph grid_graph(int w, int h);  // open boundary

// Discrete torus with vertex coordinates in {-L+1,...,L}^d.
class Torus {
 public:
  Torus(int d, int L);

  int d() const { return d_; }
  int L() const { return L_; }
  int side() const { return 2 * L_; }
  int size() const { return n_; }

  int index(const std::vector<int>& x) const;
  std::vector<int> coords(int v) const;
  int coord(int v, int j) const;
  // offset in {0..2L-1} along axis j
  int offset(int v, int j) const { return (v / stride_[j]) % side(); }
  int shifted(int v, int j, int step) const;

  // all 2d neighbors, in order +e_1,-e_1,+e_2,... (repeats when L=1)
  std::vector<int> neighbors(int v) const;
  int dist(int u, int v) const;  // l1 torus distance
  int displacement(int u, int v, int j) const;  // signed, in {-L+1..L}

  // unique nearest-neighbor edge set
  const Graph& graph() const { return g_; }

 private:
  int d_, L_, n_;
  std::vector<int> stride_;
  Graph g_;
};

// nearest or diagonal next-nearest on a 2d torus
bool box_adjacent(const Torus& t, int u, int v);

}  // namespace onlat
