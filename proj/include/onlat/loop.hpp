#pragma once
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onlat/hex.hpp"

namespace onlat {

// Edge subset of a domain, stored as a mask over the domain window's edges.
// The domain must outlive the configuration.
class LoopConfig {
 public:
  LoopConfig() = default;
  explicit LoopConfig(const HexDomain& d);

  const HexDomain& domain() const { return *dom_; }
  const HexWindow& win() const { return dom_->win(); }
  bool has(int e) const { return on_[e]; }
  void set(int e, bool v);
  void flip(int e) { set(e, !on_[e]); }
  int o() const { return o_; }
  int degree(int v) const;
  std::vector<int> edges() const;  // sorted window edge ids
  std::vector<HexEdge> hex_edges() const;
  const std::vector<char>& mask() const { return on_; }
  bool operator==(const LoopConfig& b) const { return on_ == b.on_; }

 private:
  const HexDomain* dom_ = nullptr;
  std::vector<char> on_;
  int o_ = 0;
};

struct OddDegreeError : std::invalid_argument {
  std::vector<HexVertex> vertices;
  OddDegreeError(const std::string& w, std::vector<HexVertex> v) : std::invalid_argument(w), vertices(std::move(v)) {}
};

// cyclic vertex/edge sequence; edges[i] joins vertices[i] and vertices[i+1]
struct Loop {
  std::vector<int> vertices;
  std::vector<int> edges;
  int length() const { return (int)edges.size(); }
};

// throws OddDegreeError listing every odd vertex
LoopConfig validate(const HexDomain& d, const std::vector<HexEdge>& edges);
std::vector<Loop> decompose(const LoopConfig& w);
int count_loops(const LoopConfig& w);
// the loop through v (v must have degree 2)
Loop loop_through(const LoopConfig& w, int v);

// log weight o ln x + L ln n; for x = +inf the comparison is lexicographic in
// (o, L ln n) and log_value holds L ln n only
struct LoopWeight {
  int o = 0, L = 0;
  double log_value = 0;
  bool infinite_x = false;
};
LoopWeight loop_weight(int o, int L, double n, double x);
LoopWeight loop_weight(const LoopConfig& w, double n, double x);
bool operator<(const LoopWeight& a, const LoopWeight& b);

// ---- surrounding and connectivity
bool surrounds(const HexWindow& win, const Loop& l, int u);
struct SurroundingLoop {
  int index = 0;  // into decompose(w)
  int length = 0;
};
std::vector<SurroundingLoop> loops_surrounding(const LoopConfig& w, int u);

// edge e lies on a trivial loop around a class-c hexagon of the ground state
inline bool in_ground(const HexWindow& win, int e, int c) {
  auto& hh = win.edge_hexes(e);
  return color(win.hex(hh[0])) == c || color(win.hex(hh[1])) == c;
}
// window hexagon h is a flower: all six edges in w
bool is_flower(const LoopConfig& w, int h);

enum class Connectivity { Loop, Ground };
// Ground(c): through vertices of trivial loops around class-c hexagons in w
bool connected(const LoopConfig& w, int u, int v, Connectivity mode, int c = 0);
bool connected_to_boundary(const LoopConfig& w, int u, Connectivity mode, int c = 0);

// ---- enumeration (small domains)
struct LoopState {
  std::uint64_t mask = 0;  // bit i = domain().edges()[i]
  int o = 0;
  int L = 0;  // loops (even parity) or L' (odd parity)
  bool three_paths = false;
  bool path_independent = true;  // L' the same for every simple u-v path
};

struct LoopEnumeration {
  const HexDomain* dom = nullptr;
  bool odd = false;
  int u = -1, v = -1;
  std::vector<LoopState> states;
  double J(const LoopState& s, double n) const { return s.three_paths ? 3 * n / (n + 2) : 1.0; }
  // sum of x^o n^L (times J for odd parity), via log-sum-exp
  double partition(double n, double x) const;
  std::vector<double> probabilities(double n, double x) const;  // even parity only
  LoopConfig config(std::size_t i) const;
  // mask of an arbitrary config (edges must be domain edges)
  std::uint64_t mask_of(const LoopConfig& w) const;
};

// cap on |E(H)| (<= 64)
LoopEnumeration enumerate_loops(const HexDomain& d, int cap = 36);
LoopEnumeration enumerate_odd(const HexDomain& d, int u, int v, int cap = 36);

// ---- constants
double critical_x(double n);  // 1/sqrt(2+sqrt(2-n)), 0 <= n <= 2
double hard_hexagon_lambda_c();  // (11+5 sqrt5)/2
double hexagonal_connective_constant();  // sqrt(2+sqrt2)

// left/right turns of a loop traversed counterclockwise
struct TurnCount {
  int left = 0, right = 0;
};
TurnCount loop_turns(const HexWindow& win, const Loop& l);

}  // namespace onlat
