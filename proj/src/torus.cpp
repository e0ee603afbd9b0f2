#include "onlat/torus.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace onlat {

int Graph::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= nv || v >= nv) throw std::invalid_argument("bad edge");
  int id = (int)edges.size();
  edges.emplace_back(std::min(u, v), std::max(u, v));
  adj[u].push_back(v);
  adj[v].push_back(u);
  adj_edge[u].push_back(id);
  adj_edge[v].push_back(id);
  return id;
}

bool Graph::has_edge(int u, int v) const {
  for (int w : adj[u])
    if (w == v) return true;
  return false;
}

std::string Graph::canonical() const {
  std::ostringstream os;
  os << nv << ':';
  for (auto [u, v] : edges) os << u << '-' << v << ',';
  return os.str();
}

Graph cycle_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph grid_graph(int w, int h) {
  Graph g(w * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) g.add_edge(y * w + x, y * w + x + 1);
      if (y + 1 < h) g.add_edge(y * w + x, (y + 1) * w + x);
    }
  return g;
}

Torus::Torus(int d, int L) : d_(d), L_(L) {
  if (d < 1 || L < 1) throw std::invalid_argument("torus needs d>=1, L>=1");
  n_ = 1;
  stride_.resize(d);
  for (int j = 0; j < d; ++j) {
    stride_[j] = n_;
    n_ *= side();
  }
  g_ = Graph(n_);
  for (int v = 0; v < n_; ++v)
    for (int j = 0; j < d; ++j) {
      // with side 2 the +e and -e neighbor coincide; keep one copy
      if (side() == 2 && offset(v, j) != 0) continue;
      g_.add_edge(v, shifted(v, j, 1));
    }
}

int Torus::index(const std::vector<int>& x) const {
  if ((int)x.size() != d_) throw std::out_of_range("wrong dimension");
  int v = 0;
  for (int j = 0; j < d_; ++j) {
    if (x[j] < -L_ + 1 || x[j] > L_) throw std::out_of_range("coordinate outside {-L+1..L}");
    v += (x[j] + L_ - 1) * stride_[j];
  }
  return v;
}

int Torus::coord(int v, int j) const { return offset(v, j) - L_ + 1; }

std::vector<int> Torus::coords(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range("vertex out of range");
  std::vector<int> x(d_);
  for (int j = 0; j < d_; ++j) x[j] = coord(v, j);
  return x;
}

int Torus::shifted(int v, int j, int step) const {
  int o = offset(v, j);
  int m = ((o + step) % side() + side()) % side();
  return v + (m - o) * stride_[j];
}

std::vector<int> Torus::neighbors(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range("vertex out of range");
  std::vector<int> r;
  r.reserve(2 * d_);
  for (int j = 0; j < d_; ++j) {
    r.push_back(shifted(v, j, 1));
    r.push_back(shifted(v, j, -1));
  }
  return r;
}

int Torus::displacement(int u, int v, int j) const {
  int s = side();
  int k = ((offset(v, j) - offset(u, j)) % s + s) % s;  // 0..2L-1
  return k > L_ ? k - s : k;
}

int Torus::dist(int u, int v) const {
  int r = 0;
  for (int j = 0; j < d_; ++j) r += std::abs(displacement(u, v, j));
  return r;
}

bool box_adjacent(const Torus& t, int u, int v) {
  if (t.d() != 2) throw std::invalid_argument("box adjacency needs d=2");
  if (u == v) return false;
  int dx = std::abs(t.displacement(u, v, 0));
  int dy = std::abs(t.displacement(u, v, 1));
  return dx <= 1 && dy <= 1;
}

}  // namespace onlat
