#include "onlat/saw.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "onlat/loop.hpp"

namespace onlat {

namespace {

// brick-wall picture of the honeycomb: (x,y) ~ (x+-1,y), and (x,y+1) when
// x+y is even, (x,y-1) otherwise
struct Brick {
  int side, off;
  std::vector<char> seen;
  bool mirror;
  explicit Brick(int k, bool m) : side(2 * k + 5), off(k + 2), seen((size_t)side * side, 0), mirror(m) {}
  int id(int x, int y) const { return (x + off) + (y + off) * side; }
  std::array<std::array<int, 2>, 3> nbrs(int x, int y) const {
    int vert = ((x + y) & 1) == 0 ? 1 : -1;
    if (mirror) vert = -vert;
    return {{{x + 1, y}, {x - 1, y}, {x, y + vert}}};
  }
};

void dfs(Brick& b, int x, int y, int depth, int k_max, std::vector<std::uint64_t>& s) {
  ++s[depth];
  if (depth == k_max) return;
  for (auto [nx, ny] : b.nbrs(x, y)) {
    int i = b.id(nx, ny);
    if (b.seen[i]) continue;
    b.seen[i] = 1;
    dfs(b, nx, ny, depth + 1, k_max, s);
    b.seen[i] = 0;
  }
}

}  // namespace

SawCountTable enumerate_saw(int k_max, int origin, bool mirrored, bool reduced) {
  if (k_max < 0 || k_max > 30) throw std::invalid_argument("k_max must be in [0,30] (exact DFS budget)");
  static const int ox[3] = {0, 1, 3}, oy[3] = {0, 0, 2};
  if (origin < 0 || origin > 2) throw std::invalid_argument("origin must be 0, 1 or 2");
  Brick b(k_max + 4, mirrored);
  int x0 = ox[origin], y0 = oy[origin];
  SawCountTable t;
  t.s.assign(k_max + 1, 0);
  b.seen[b.id(x0, y0)] = 1;
  if (!reduced || k_max == 0) {
    dfs(b, x0, y0, 0, k_max, t.s);
    return t;
  }
  // the three first steps are related by a lattice rotation about the origin
  t.s[0] = 1;
  auto first = b.nbrs(x0, y0)[0];
  std::vector<std::uint64_t> sub(k_max + 1, 0);
  b.seen[b.id(first[0], first[1])] = 1;
  dfs(b, first[0], first[1], 1, k_max, sub);
  for (int k = 1; k <= k_max; ++k) t.s[k] = 3 * sub[k];
  return t;
}

ConnectiveEstimates connective_estimates(const SawCountTable& t) {
  ConnectiveEstimates c;
  c.root.assign(t.s.size(), 0);
  c.running.assign(t.s.size(), 0);
  double inf = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= t.k_max(); ++k) {
    c.root[k] = std::exp(std::log((double)t.s[k]) / k);
    inf = std::min(inf, c.root[k]);
    c.running[k] = inf;
  }
  c.upper = inf;
  c.gap = inf - hexagonal_connective_constant();
  return c;
}

SawPartition saw_two_edge_partition(const HexDomain& d, double x, int e1, int e2, int k_max) {
  if (!(x >= 0)) throw std::invalid_argument("x must be >= 0");
  if (e1 < 0 || e2 < 0 || e1 >= d.win().num_edges() || e2 >= d.win().num_edges() || !d.star_edge(e1) ||
      !d.star_edge(e2))
    throw std::invalid_argument("e1 and e2 must be boundary edges of the domain");
  const HexWindow& win = d.win();
  auto inner = [&](int e) {
    auto& ev = win.edge_vertices(e);
    return d.in_vertex(ev[0]) ? ev[0] : ev[1];
  };
  int a = inner(e1), z = inner(e2);
  SawPartition r;
  r.counts.assign(k_max + 1, 0);
  std::vector<char> seen(win.num_vertices(), 0);
  std::function<void(int, int)> go = [&](int v, int depth) {
    if (v == z) {
      ++r.counts[depth];
      return;  // the walk leaves through e2
    }
    if (depth == k_max) return;
    for (int e : win.vertex_edges(v)) {
      if (e < 0 || !d.in_edge(e)) continue;
      int u = win.other_end(e, v);
      if (seen[u]) continue;
      seen[u] = 1;
      go(u, depth + 1);
      seen[u] = 0;
    }
  };
  seen[a] = 1;
  go(a, 0);
  for (int k = 0; k <= k_max; ++k) r.Z += r.counts[k] * (k == 0 ? 1.0 : std::pow(x, k));
  return r;
}

}  // namespace onlat
