#include <algorithm>
#include <bit>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "doctest.h"
#include "onlat/loop.hpp"
#include "onlat/oracle.hpp"
#include "onlat/representations.hpp"
#include "onlat/stats.hpp"

using namespace onlat;

namespace {

const double kPi = std::numbers::pi;

// clusters of (V, open) by depth-first search
int count_components(const Graph& g, std::uint64_t open) {
  std::vector<int> seen(g.nv, 0);
  int comps = 0;
  for (int s = 0; s < g.nv; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::vector<int> st{s};
    seen[s] = 1;
    while (!st.empty()) {
      int a = st.back();
      st.pop_back();
      for (size_t i = 0; i < g.adj[a].size(); ++i)
        if ((open >> g.adj_edge[a][i]) & 1) {
          int b = g.adj[a][i];
          if (!seen[b]) seen[b] = 1, st.push_back(b);
        }
    }
  }
  return comps;
}

double bessel_by_series(int k, double x, int terms) {
  double s = 0;
  for (int m = 0; m < terms; ++m) s += std::pow(x / 2, 2 * m + k) / (std::tgamma(m + 1.0) * std::tgamma(m + k + 1.0));
  return s;
}

std::uint64_t es_mask(const FkState& s) {
  std::uint64_t m = 0;
  for (size_t e = 0; e < s.open.size(); ++e)
    if (s.open[e]) m |= 1ull << e;
  return m;
}

}  // namespace

TEST_CASE("FK basics") {
  CHECK(fk_p(0) == 0.0);
  CHECK(fk_p(0.3) < fk_p(0.5));
  Graph g = grid_graph(3, 3);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<char> open(g.ne());
    std::uint64_t m = 0;
    for (int e = 0; e < g.ne(); ++e)
      if (rng.coin()) open[e] = 1, m |= 1ull << e;
    CHECK(fk_cluster_count(g, open) == count_components(g, m));
  }

  EdwardsSokalChain z(g, 0.0, 2);
  double plus = 0;
  for (int i = 0; i < 2000; ++i) {
    z.step();
    CHECK(z.fk().num_open() == 0);
    plus += z.spins()[4] > 0;
  }
  CHECK(std::abs(plus / 2000 - 0.5) < 0.05);
}

TEST_CASE("Edwards-Sokal: correlation equals connection probability") {
  Graph g = grid_graph(2, 3);
  const double beta = 0.6;
  auto ising = exact_ising(g, beta);
  auto fk = exact_fk(g, fk_p(beta), 2.0);
  EdwardsSokalChain ch(g, beta, 3);
  int x = 0, y = 5;
  std::vector<double> corr, conn;
  for (int i = 0; i < 100; ++i) ch.step();
  for (int i = 0; i < 100000; ++i) {
    ch.step();
    corr.push_back(ch.spins()[x] * ch.spins()[y]);
    conn.push_back(ch.connected(x, y));
  }
  auto a = estimate(corr), b = estimate(conn);
  CHECK(std::abs(fk.rho_at(x, y) - ising.rho_at(x, y)) < 1e-12);
  CHECK(std::abs(a.mean - ising.rho_at(x, y)) < 3 * a.std_error);
  CHECK(std::abs(b.mean - fk.rho_at(x, y)) < 3 * b.std_error);
  CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.std_error, b.std_error));

  // the bond marginal is the random-cluster law
  std::vector<double> probs(1ull << g.ne()), counts(probs.size(), 0);
  double p = fk_p(beta), tot = 0;
  for (std::uint64_t m = 0; m < probs.size(); ++m) {
    int k = std::popcount(m);
    probs[m] = std::pow(2.0, count_components(g, m)) * std::pow(p, k) * std::pow(1 - p, g.ne() - k);
    tot += probs[m];
  }
  for (auto& q : probs) q /= tot;
  for (int i = 0; i < 200000; ++i) {
    ch.step();
    counts[es_mask(ch.fk())] += 1;
  }
  auto cs = chi_square(counts, probs);
  INFO("chi2 " << cs.stat << " p " << cs.p);
  CHECK(cs.p > 0.001);
}

TEST_CASE("high-temperature expansion for n=1") {
  for (double beta : {0.2, 0.7}) {
    Graph g = grid_graph(3, 3);
    double lhs = exact_ising(g, beta).logZ;
    // sum over E of (e^{2 beta}-1)^{|E|} 2^{N(E)}, times e^{-beta |E(G)|}
    double s = 0, even = 0;
    for (std::uint64_t m = 0; m < (1ull << g.ne()); ++m) {
      int k = std::popcount(m);
      s += std::pow(std::expm1(2 * beta), k) * std::pow(2.0, count_components(g, m));
      std::vector<int> deg(g.nv, 0);
      for (int e = 0; e < g.ne(); ++e)
        if ((m >> e) & 1) deg[g.edges[e].first]++, deg[g.edges[e].second]++;
      if (std::all_of(deg.begin(), deg.end(), [](int d) { return d % 2 == 0; })) even += std::pow(std::tanh(beta), k);
    }
    CHECK(std::abs(-beta * g.ne() + std::log(s) - lhs) < 1e-10);
    CHECK(std::abs(g.nv * std::log(2.0) + g.ne() * std::log(std::cosh(beta)) + std::log(even) - lhs) < 1e-10);
  }
}

TEST_CASE("Fourier weights") {
  CHECK(fourier_weight(FourierModel::XY, 0, 0) == 1.0);
  CHECK(fourier_weight(FourierModel::XY, 0, 3) == 0.0);
  CHECK(std::abs(fourier_weight(FourierModel::XY, 2, 1) - bessel_by_series(1, 2, 40)) < 1e-13);
  CHECK(std::abs(fourier_weight(FourierModel::XY, 2, 1) - 1.590637) < 1e-6);
  for (double b : {0.5, 1.0, 3.0, 10.0})
    for (int k : {0, 1, 2, 5}) {
      double w = fourier_weight(FourierModel::XY, b, k);
      CHECK(w > 0);
      CHECK(w == fourier_weight(FourierModel::XY, b, -k));
      CHECK(w == doctest::Approx(boost::math::cyl_bessel_i(k, b)).epsilon(1e-13));
      double v = fourier_weight(FourierModel::Villain, b, k);
      CHECK(v / fourier_weight(FourierModel::Villain, b, 0) ==
            doctest::Approx(std::exp(-2 * kPi * kPi * k * k / b)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(fourier_weight(FourierModel::XY, 1e300, 0), std::runtime_error);
}

TEST_CASE("flows and heights") {
  auto G = planar_grid(3, 3);
  CHECK(flow_to_height(G, Flow(G.g.ne(), 0)) == Height(G.nfaces, 0));
  CHECK(height_to_flow(G, Height(G.nfaces, 0)) == Flow(G.g.ne(), 0));

  // unit height on the single inner face of a hexagon: unit circulation
  auto hexg = planar_cycle(6);
  Height one{0, 1};
  auto k = height_to_flow(hexg, one);
  CHECK(is_flow(hexg, k));
  // same circulation on every edge, read against the stored orientation
  auto around = [&](int e) { return hexg.faces[e][0] == 1 ? k[e] : -k[e]; };
  for (int e = 0; e < 6; ++e) {
    CHECK(std::abs(k[e]) == 1);
    CHECK(around(e) == around(0));
  }

  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    Height f(G.nfaces, 0);
    for (int i = 1; i < G.nfaces; ++i) f[i] = (int)rng.below(9) - 4;
    auto fl = height_to_flow(G, f);
    CHECK(is_flow(G, fl));
    CHECK(flow_to_height(G, fl) == f);
  }
  Flow bad(G.g.ne(), 0);
  bad[0] = 1;
  CHECK_FALSE(is_flow(G, bad));
  CHECK_THROWS(flow_to_height(G, bad));
}

TEST_CASE("flow partitions equal angle quadrature") {
  auto e = planar_single_edge();
  CHECK(flow_partition(e, FourierModel::XY, 1.0, 4).Z == doctest::Approx(fourier_weight(FourierModel::XY, 1.0, 0)));
  auto c4 = planar_cycle(4);
  auto xy = flow_partition(c4, FourierModel::XY, 1.0, 8);
  auto qxy = angle_quadrature(c4.g, FourierModel::XY, 1.0);
  REQUIRE(qxy.converged);
  CHECK(std::abs(xy.Z - qxy.Z) < 1e-6);
  CHECK(xy.remainder < 1e-6);
  auto vi = flow_partition(c4, FourierModel::Villain, 2.0, 8);
  auto qvi = angle_quadrature(c4.g, FourierModel::Villain, 2.0);
  REQUIRE(qvi.converged);
  CHECK(std::abs(vi.Z - qvi.Z) < 1e-6);
}

TEST_CASE("Perron representations") {
  auto s = perron_representation(star_graph(4), 0.5);
  CHECK(s.lambda == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.psi[0] == doctest::Approx(2.0).epsilon(1e-12));
  for (int i = 1; i <= 4; ++i) CHECK(s.psi[i] == doctest::Approx(1.0).epsilon(1e-12));
  auto c = star_representation(4, 0.5);
  CHECK(c.lambda == doctest::Approx(s.lambda));
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) CHECK(c.h_pair(a, b) == doctest::Approx(s.h_pair(a, b)).epsilon(1e-12));

  auto k2 = perron_representation(path_graph(2), 0.3);
  CHECK(k2.lambda == doctest::Approx(1.0));
  CHECK(k2.h_pair(0, 1) == doctest::Approx(0.3));
  CHECK(k2.h(0, 0, 1) == doctest::Approx(0.3));
  CHECK(k2.h(0, 0, 0) == 1.0);

  Graph two(2);
  CHECK_THROWS(perron_representation(two, 0.5));

  // eigen-equation and the single loop identity on a random connected graph
  Graph G = cycle_graph(5);
  G.add_edge(0, 2);
  auto r = perron_representation(G, 0.7);
  for (int a = 0; a < G.nv; ++a) {
    double s2 = 0;
    for (int b : G.adj[a]) s2 += r.psi[b];
    CHECK(s2 == doctest::Approx(r.lambda * r.psi[a]).epsilon(1e-11));
    for (int mp : {0, 1, 3, 7})
      CHECK(single_loop_sum(r, a, mp + 6, mp) ==
            doctest::Approx(std::pow(0.7, 2 * mp + 6) * r.lambda).epsilon(1e-10));
  }
}

TEST_CASE("star representation pushes forward to the loop O(2) law") {
  auto d = HexDomain::from_hexagons({{0, 0}, {1, 3}, {2, 0}});
  REQUIRE(d.is_type(0));
  const auto& win = d.win();
  const double x = 0.5;
  auto r = star_representation(4, x);
  auto en = enumerate_loops(d);
  std::map<std::uint64_t, int> idx;
  for (size_t i = 0; i < en.states.size(); ++i) idx[en.states[i].mask] = (int)i;

  std::vector<int> free = d.hexes();
  std::vector<double> push(en.states.size(), 0);
  std::vector<int> spins(win.num_hexes(), 0);
  long total = 1;
  for (size_t i = 0; i < free.size(); ++i) total *= 5;
  MESSAGE("spin configurations: " << total);
  double Z = 0;
  for (long c = 0; c < total; ++c) {
    long t = c;
    for (int h : free) spins[h] = (int)(t % 5), t /= 5;
    double w = spin_weight(r, d, spins);
    if (w == 0) continue;
    auto lw = spins_to_loops(d, spins);
    push[idx.at(en.mask_of(lw))] += w;
    Z += w;
  }
  auto p = en.probabilities(2.0, x);
  for (size_t i = 0; i < p.size(); ++i) CHECK(std::abs(push[i] / Z - p[i]) < 1e-12);
}

TEST_CASE("DGFF") {
  Torus t(2, 16);
  Rng rng(6);
  const double beta = 1.0;
  int x = t.index({4, 0});
  double var = dgff_variance(t, beta, x);
  const int o = t.index({0, 0});
  CHECK(dgff_variance(t, beta, o) == 0.0);
  std::vector<double> cs;
  for (int i = 0; i < 4000; ++i) {
    auto h = dgff_sample(t, beta, rng);
    CHECK(h[o] == 0.0);
    cs.push_back(std::cos(h[x]));
  }
  auto e = estimate(cs);
  INFO("E cos " << e.mean << " +- " << e.std_error << " exact " << std::exp(-var / 2));
  CHECK(std::abs(e.mean - std::exp(-var / 2)) < 3 * e.std_error);

  // logarithmic growth: (a / beta) ln 2 between distances 4 and 8, a from samples
  auto fitted_a = [&](double b) {
    std::vector<double> v4, v8;
    for (int i = 0; i < 400; ++i) {
      auto h = dgff_sample(t, b, rng);
      double s4 = 0, s8 = 0;
      for (int y = 0; y < t.size(); ++y)
        for (int j = 0; j < 2; ++j) {
          double a4 = h[t.shifted(y, j, 4)] - h[y], a8 = h[t.shifted(y, j, 8)] - h[y];
          s4 += a4 * a4;
          s8 += a8 * a8;
        }
      v4.push_back(s4 / (2 * t.size()));
      v8.push_back(s8 / (2 * t.size()));
    }
    auto e4 = estimate(v4), e8 = estimate(v8);
    CHECK(std::abs(e4.mean - dgff_variance(t, b, t.index({4, 0}))) < 3 * e4.std_error);
    CHECK(std::abs(e8.mean - dgff_variance(t, b, t.index({8, 0}))) < 3 * e8.std_error);
    return b * (e8.mean - e4.mean) / std::log(2.0);
  };
  double a1 = fitted_a(1.0), a2 = fitted_a(2.0);
  MESSAGE("fitted a: " << a1 << " " << a2 << " (1/pi = " << 1 / kPi << ")");
  CHECK(std::abs(a1 - a2) / a1 < 0.15);
}

TEST_CASE("hard hexagons") {
  HardHexagon tiny(30, 30, 1e-9, 7, 0, true);
  for (int i = 0; i < 50; ++i) tiny.sweep();
  CHECK(tiny.occupied_count() == 0);

  HardHexagon h(30, 30, 5.0, 8);
  for (int i = 0; i < 2000; ++i) h.sweep();
  std::array<std::vector<double>, 3> ser;
  for (int i = 0; i < 20000; ++i) {
    h.sweep();
    auto dd = h.densities();
    for (int c = 0; c < 3; ++c) ser[c].push_back(dd[c]);
  }
  CHECK(h.independent());
  std::array<ChainEstimate, 3> e{estimate(ser[0]), estimate(ser[1]), estimate(ser[2])};
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      INFO(e[a].mean << " +- " << e[a].std_error << " vs " << e[b].mean << " +- " << e[b].std_error);
      CHECK(std::abs(e[a].mean - e[b].mean) < 3 * std::hypot(e[a].std_error, e[b].std_error));
    }

  HardHexagon o(30, 30, 20.0, 9, 0, true);
  for (int i = 0; i < 2000; ++i) o.sweep();
  auto dd = o.densities();
  std::sort(dd.begin(), dd.end());
  CHECK(dd[2] - dd[1] > 0.1);
  CHECK(o.independent());
  CHECK_THROWS(HardHexagon(10, 9, 1.0, 1));
}

TEST_CASE("Griffiths inequalities at oracle level") {
  Rng rng(10);
  std::vector<Graph> graphs{path_graph(3), cycle_graph(4), cycle_graph(5), grid_graph(2, 2)};
  graphs.back().add_edge(0, 3);
  for (auto& g : graphs) {
    std::vector<double> J(g.ne());
    for (auto& j : J) j = 0.1 + rng.uniform();
    auto t = exact_ising(g, J, true);
    int N = g.nv;
    for (std::uint64_t A = 1; A < (1ull << N); ++A) CHECK(ising_moment(t, A) >= -1e-12);
    for (int x = 0; x < N; ++x)
      for (int y = x + 1; y < N; ++y)
        for (int z = 0; z < N; ++z)
          for (int w = z + 1; w < N; ++w) {
            std::uint64_t a = (1ull << x) | (1ull << y), b = (1ull << z) | (1ull << w);
            CHECK(ising_moment(t, a ^ b) - ising_moment(t, a) * ising_moment(t, b) >= -1e-12);
          }
  }
  // n = 2 by converged quadrature, 4 vertices
  Graph g = cycle_graph(4);
  g.add_edge(0, 2);
  for (double beta : {0.5, 1.2}) {
    std::vector<AngleFn> fns;
    std::vector<std::array<int, 4>> idx;
    for (int x = 0; x < 4; ++x)
      for (int y = x + 1; y < 4; ++y)
        for (int z = 0; z < 4; ++z)
          for (int w = z + 1; w < 4; ++w) {
            idx.push_back({x, y, z, w});
            fns.push_back([=](const std::vector<double>& th) { return std::cos(th[x] - th[y]); });
            fns.push_back([=](const std::vector<double>& th) { return std::cos(th[z] - th[w]); });
            fns.push_back(
                [=](const std::vector<double>& th) { return std::cos(th[x] - th[y]) * std::cos(th[z] - th[w]); });
          }
    auto r = angle_expectations_converged(g, Potential::ferromagnetic(beta), fns, 1e-10, 8, 128);
    REQUIRE(r.converged);
    for (size_t i = 0; i < idx.size(); ++i) {
      double a = r.values[3 * i], b = r.values[3 * i + 1], ab = r.values[3 * i + 2];
      CHECK(a >= -1e-9);
      CHECK(ab >= -1e-9);
      CHECK(ab - a * b >= -1e-8);
    }
  }
}

TEST_CASE("Ginibre integrals are non-negative for n = 1, 2") {
  // exponent vectors (k, l) per pair with total degree <= 4
  for (int N = 1; N <= 3; ++N) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) pairs.push_back({i, j});
    int P = (int)pairs.size();
    std::vector<std::vector<int>> exps;
    std::vector<int> cur(2 * P, 0);
    std::function<void(int, int)> gen = [&](int pos, int left) {
      if (pos == 2 * P) {
        exps.push_back(cur);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        cur[pos] = v;
        gen(pos + 1, left - v);
      }
      cur[pos] = 0;
    };
    gen(0, 4);
    auto integrand = [&](const std::vector<int>& ex, const std::vector<double>& s, const std::vector<double>& sp,
                         auto dot) {
      double v = 1;
      for (int q = 0; q < P; ++q) {
        double a = dot(s, pairs[q].first, pairs[q].second), b = dot(sp, pairs[q].first, pairs[q].second);
        v *= std::pow(a - b, ex[2 * q]) * std::pow(a + b, ex[2 * q + 1]);
      }
      return v;
    };
    for (auto& ex : exps) {
      // n = 1: exact sum over signs
      double s1 = 0;
      auto dot1 = [](const std::vector<double>& s, int i, int j) { return s[i] * s[j]; };
      for (int m = 0; m < (1 << (2 * N)); ++m) {
        std::vector<double> s(N), sp(N);
        for (int i = 0; i < N; ++i) s[i] = (m >> i) & 1 ? -1 : 1, sp[i] = (m >> (N + i)) & 1 ? -1 : 1;
        s1 += integrand(ex, s, sp, dot1);
      }
      CHECK(s1 >= -1e-8);
      // n = 2: a 16-point grid integrates these trigonometric polynomials exactly;
      // the integrand is invariant under separate rotations, so fix both first angles
      const int M = 16;
      auto dot2 = [](const std::vector<double>& th, int i, int j) { return std::cos(th[i] - th[j]); };
      long cells = 1;
      for (int i = 0; i < 2 * (N - 1); ++i) cells *= M;
      double s2 = 0;
      for (long c = 0; c < cells; ++c) {
        std::vector<double> th(N, 0), tp(N, 0);
        long t = c;
        for (int i = 1; i < N; ++i) th[i] = 2 * kPi * (t % M) / M, t /= M;
        for (int i = 1; i < N; ++i) tp[i] = 2 * kPi * (t % M) / M, t /= M;
        s2 += integrand(ex, th, tp, dot2);
      }
      CHECK(s2 / cells >= -1e-8);
    }
  }
}

TEST_CASE("Peierls bound on T_2^2") {
  Torus t(2, 2);
  const Graph& g = t.graph();
  // the two plaquettes (by lower-left corner) on either side of each edge
  std::vector<std::array<int, 2>> plaq(g.ne());
  for (int e = 0; e < g.ne(); ++e) {
    auto [u, v] = g.edges[e];
    int j = t.coord(u, 0) == t.coord(v, 0) ? 1 : 0;  // axis of the edge
    int low = t.displacement(u, v, j) == 1 ? u : v;
    int other = 1 - j;
    plaq[e] = {low, t.shifted(low, other, -1)};
  }
  for (double beta : {0.3, 0.6}) {
    auto ex = exact_ising(g, beta, true);
    std::map<std::uint64_t, double> pr;
    for (auto& [s, lw] : ex.states) {
      std::uint64_t D = 0;
      for (int e = 0; e < g.ne(); ++e)
        if ((((s >> g.edges[e].first) ^ (s >> g.edges[e].second)) & 1)) D |= 1ull << e;
      // split D into contours: dual edges meeting at a plaquette are connected
      std::uint64_t left = D;
      while (left) {
        int e0 = std::countr_zero(left);
        std::uint64_t comp = 1ull << e0, grow = comp;
        while (grow) {
          std::uint64_t next = 0;
          for (std::uint64_t gr = grow; gr; gr &= gr - 1) {
            int e = std::countr_zero(gr);
            for (std::uint64_t r2 = left & ~comp; r2; r2 &= r2 - 1) {
              int f = std::countr_zero(r2);
              if (plaq[e][0] == plaq[f][0] || plaq[e][0] == plaq[f][1] || plaq[e][1] == plaq[f][0] ||
                  plaq[e][1] == plaq[f][1])
                next |= 1ull << f;
            }
          }
          comp |= next;
          grow = next;
        }
        pr[comp] += std::exp(lw - ex.logZ);
        left &= ~comp;
      }
    }
    int bad = 0;
    for (auto& [c, p] : pr)
      if (p > std::exp(-2 * beta * std::popcount(c)) * (1 + 1e-12)) ++bad;
    CHECK(bad == 0);
    CHECK(pr.size() > 100);
  }
}
