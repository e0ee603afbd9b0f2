#include "onlat/loop_samplers.hpp"

#include <cmath>

namespace onlat {

DeltaCounts delta_counts(const LoopConfig& w, int h) {
  const HexWindow& win = w.win();
  if (!w.domain().in_hex(h)) throw std::invalid_argument("hexagon is not interior to the domain");
  const auto& he = win.hex_edges(h);
  const auto& hv = win.hex_vertices(h);
  bool b[6];
  int on = 0;
  for (int i = 0; i < 6; ++i) {
    b[i] = w.has(he[i]);
    on += b[i];
  }
  DeltaCounts d;
  d.d_o = 6 - 2 * on;
  // corner i touches boundary edges i and i+1; its spoke is on iff they differ
  int spokes[6], ns = 0;
  int pos[6];
  for (int i = 0; i < 6; ++i) {
    pos[i] = -1;
    if (b[i] != b[(i + 1) % 6]) {
      pos[i] = ns;
      spokes[ns++] = i;
    }
  }
  if (ns == 0) {
    d.d_L = on ? -1 : 1;
    return d;
  }
  if (ns == 2) return d;  // one strand in, one out: loop count unchanged
  // external pairing: follow each strand away from h until it re-enters
  int ext[6], in_before[6], in_after[6];
  for (int j = 0; j < ns; ++j) ext[j] = -1;
  for (int j = 0; j < ns; ++j) {
    if (ext[j] >= 0) continue;
    int v = hv[spokes[j]];
    int e = -1;
    for (int f : win.vertex_edges(v))
      if (f >= 0 && f != he[spokes[j]] && f != he[(spokes[j] + 1) % 6]) e = f;
    int cur = win.other_end(e, v);
    while (true) {
      int k = -1;
      for (int i = 0; i < 6; ++i)
        if (hv[i] == cur) k = i;
      if (k >= 0) {
        ext[j] = pos[k];
        ext[pos[k]] = j;
        break;
      }
      int nxt = -1;
      for (int f : win.vertex_edges(cur))
        if (f >= 0 && f != e && w.has(f)) nxt = f;
      e = nxt;
      cur = win.other_end(e, cur);
    }
  }
  for (int j = 0; j < ns; ++j) {
    bool fwd = b[(spokes[j] + 1) % 6];
    int nx = (j + 1) % ns, pv = (j + ns - 1) % ns;
    in_before[j] = fwd ? nx : pv;
    in_after[j] = fwd ? pv : nx;
  }
  auto cycles = [&](const int* in) {
    bool seen[6] = {false, false, false, false, false, false};
    int c = 0;
    for (int j = 0; j < ns; ++j) {
      if (seen[j]) continue;
      ++c;
      int a = j;
      do {
        seen[a] = true;
        int bb = ext[a];
        seen[bb] = true;
        a = in[bb];
      } while (a != j);
    }
    return c;
  };
  d.d_L = cycles(in_after) - cycles(in_before);
  return d;
}

FlipResult face_flip_step(LoopConfig& w, double n, double x, Rng& rng) {
  const auto& hs = w.domain().hexes();
  FlipResult r;
  if (hs.empty()) return r;
  r.hex = hs[rng.below(hs.size())];
  r.delta = delta_counts(w, r.hex);
  const int dO = r.delta.d_o, dL = r.delta.d_L;
  bool acc;
  if (std::isinf(x)) {
    if (dO < 0)
      acc = false;
    else if (dO > 0)
      acc = true;
    else
      acc = dL >= 0 || rng.uniform() < std::pow(n, dL);
  } else {
    double lr = dO * std::log(x) + dL * std::log(n);
    acc = lr >= 0 || rng.uniform() < std::exp(lr);
  }
  if (acc) {
    for (int e : w.win().hex_edges(r.hex)) w.flip(e);
    r.accepted = true;
  }
  return r;
}

LoopChain::LoopChain(const HexDomain& d, double n, double x, std::uint64_t seed, std::uint64_t stream)
    : LoopChain(LoopConfig(d), n, x, seed, stream) {}

LoopChain::LoopChain(LoopConfig start, double n, double x, std::uint64_t seed, std::uint64_t stream)
    : w_(std::move(start)), n_(n), x_(x), rng_(seed, stream) {
  if (!(n > 0) || !(x > 0)) throw std::invalid_argument("loop chain needs n > 0 and x > 0");
  L_ = count_loops(w_);
}

IsingInterfaceSampler::IsingInterfaceSampler(const HexDomain& d, double x, std::uint64_t seed, std::uint64_t stream)
    : dom_(&d), x_(x), rng_(seed, stream) {
  if (!(x > 0) || std::isinf(x)) throw std::invalid_argument("interface sampler needs 0 < x < inf");
  spin_.assign(d.win().num_hexes(), 1);
  free_ = d.hexes();
  for (int h : free_) spin_[h] = rng_.coin() ? 1 : -1;
}

void IsingInterfaceSampler::sweep() {
  const HexWindow& win = dom_->win();
  for (int h : free_) {
    int s = 0;
    for (int i = 0; i < 6; ++i) s += spin_[win.hex_index(win.hex(h) + kHexDir[i])];
    // P(+1) = x^{#minus nbrs} / (x^{#minus} + x^{#plus}) = 1/(1 + x^s)
    double p = 1.0 / (1.0 + std::pow(x_, s));
    spin_[h] = rng_.uniform() < p ? 1 : -1;
  }
}

LoopConfig IsingInterfaceSampler::interfaces() const {
  LoopConfig w(*dom_);
  const HexWindow& win = dom_->win();
  for (int e : dom_->edges()) {
    auto& hh = win.edge_hexes(e);
    if (spin_[hh[0]] != spin_[hh[1]]) w.set(e, true);
  }
  return w;
}

LoopConfig ising_interface_sample(const HexDomain& d, double x, Rng& rng, int sweeps) {
  IsingInterfaceSampler s(d, x, rng.next());
  return s.sample(sweeps);
}

}  // namespace onlat
