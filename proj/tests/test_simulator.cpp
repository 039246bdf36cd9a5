#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "erwalk/moments.hpp"
#include "erwalk/simulator.hpp"

using namespace erwalk;

TEST_CASE("sample_graph endpoints and determinism") {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    CHECK(sample_graph(3, 0.0, rng).edge_count() == 0);
    CHECK(sample_graph(3, 1.0, rng).edge_count() == 3);
  }
  Rng a(11), b(11);
  for (int rep = 0; rep < 50; ++rep) {
    const GraphSample ga = sample_graph(4, 0.5, a), gb = sample_graph(4, 0.5, b);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(ga.has_edge(i, j) == gb.has_edge(i, j));
  }
}

TEST_CASE("graph samples are symmetric without self-loops") {
  Rng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const GraphSample g = sample_graph(6, 0.4, rng);
    int degree_sum = 0;
    for (int i = 0; i < 6; ++i) {
      CHECK_FALSE(g.has_edge(i, i));
      for (int j = 0; j < 6; ++j) CHECK(g.has_edge(i, j) == g.has_edge(j, i));
      CHECK(int(g.neighbors(i).size()) == g.degree(i));
      degree_sum += g.degree(i);
    }
    CHECK(degree_sum == 2 * g.edge_count());
  }
}

TEST_CASE("edge frequency matches p") {
  Rng rng(17);
  const int n = 5, draws = 20000;
  const double p = 0.3;
  long present = 0;
  for (int r = 0; r < draws; ++r) present += sample_graph(n, p, rng).edge_count();
  const double trials = double(draws) * n * (n - 1) / 2;
  const double se = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(present / trials - p) < 3 * se);
}

TEST_CASE("step on the empty graph never moves anyone") {
  Rng rng(1);
  GraphSample g(4);
  WalkerPositions x{0, 1, 2, 3, 3};
  const WalkerPositions before = x;
  for (int s = 0; s < 100; ++s) step(x, g, rng);
  CHECK(x == before);
}

TEST_CASE("single edge: stay with probability one half") {
  Rng rng(99);
  GraphSample g(2);
  g.set_edge(0, 1, true);
  const int draws = 100000;
  int stays = 0;
  for (int s = 0; s < draws; ++s) {
    WalkerPositions x{0};
    step(x, g, rng);
    stays += x[0] == 0;
  }
  const double se = std::sqrt(0.25 / draws);
  CHECK(std::abs(stays / double(draws) - 0.5) < 3 * se);
}

TEST_CASE("complete graph: next vertex is uniform (chi-square)") {
  Rng rng(2024);
  const int n = 5, draws = 100000;
  GraphSample g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
  std::vector<int> hits(n, 0);
  for (int s = 0; s < draws; ++s) {
    WalkerPositions x{2};
    step(x, g, rng);
    ++hits[x[0]];
  }
  double chi2 = 0.0;
  const double expected = double(draws) / n;
  for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
  // 4 degrees of freedom, 0.999 quantile.
  CHECK(chi2 < 18.47);
}

TEST_CASE("simulate: frozen walkers with p = 0") {
  SimConfig cfg;
  cfg.dims = {3, 5};
  cfg.p = 0.0;
  cfg.T = 50;
  cfg.burn_in = 10;
  cfg.init = InitMode::all_at_first;
  const auto s = simulate(cfg);
  CHECK(s.T() == 50);
  for (int t = 0; t < s.T(); ++t) {
    CHECK(s.counts(t, 0) == 5);
    CHECK(s.counts(t, 1) == 0);
    CHECK(s.counts(t, 2) == 0);
  }
}

TEST_CASE("simulate: conservation and determinism") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xdeadbeefull}) {
    SimConfig cfg;
    cfg.dims = {6, 11};
    cfg.p = 0.35;
    cfg.T = 500;
    cfg.burn_in = 20;
    cfg.seed = seed;
    const auto a = simulate(cfg), b = simulate(cfg);
    CHECK(a.counts == b.counts);
    CHECK((a.counts.rowwise().sum().array() == 11).all());
    CHECK_NOTHROW(a.validate());
    CHECK(a.burn_in == 20);
  }
  SimConfig c1, c2;
  c1.dims = c2.dims = {4, 4};
  c1.T = c2.T = 200;
  c2.seed = 1;
  CHECK(simulate(c1).counts != simulate(c2).counts);
}

TEST_CASE("simulate: explicit start") {
  SimConfig cfg;
  cfg.dims = {3, 3};
  cfg.p = 0.0;
  cfg.T = 3;
  cfg.burn_in = 0;
  cfg.init = InitMode::explicit_positions;
  cfg.positions = {2, 2, 1};
  const auto s = simulate(cfg);
  CHECK(s.counts(0, 0) == 0);
  CHECK(s.counts(0, 1) == 1);
  CHECK(s.counts(0, 2) == 2);
  cfg.positions = {2, 3, 1};
  CHECK_THROWS_AS(simulate(cfg), DomainError);
  cfg.positions = {0, 1};
  CHECK_THROWS_AS(simulate(cfg), DomainError);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.T = 1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.T = 10;
  cfg.burn_in = -1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.burn_in = 0;
  cfg.p = 1.5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("stay frequency of one walker matches F at n=2, p=1") {
  SimConfig cfg;
  cfg.dims = {2, 1};
  cfg.p = 1.0;
  cfg.T = 100000;
  cfg.burn_in = 0;
  cfg.seed = 8;
  const auto s = simulate(cfg);
  int stays = 0;
  for (int t = 0; t + 1 < s.T(); ++t) stays += s.counts(t, 0) == s.counts(t + 1, 0);
  const double freq = stays / double(s.T() - 1);
  const double se = std::sqrt(0.25 / (s.T() - 1));
  CHECK(std::abs(freq - stay_prob(2, 1.0)) < 3 * se);
}

TEST_CASE("per-walker stay frequency matches stay_prob") {
  for (auto [n, p] : {std::pair{3, 0.5}, std::pair{7, 0.2}, std::pair{5, 0.9}}) {
    SimConfig cfg;
    cfg.dims = {n, 4};
    cfg.p = p;
    cfg.seed = 123;
    Simulator sim(cfg);
    long stays = 0, total = 0;
    for (int s = 0; s < 25000; ++s) {
      const WalkerPositions before = sim.positions();
      sim.advance();
      for (std::size_t w = 0; w < before.size(); ++w) stays += before[w] == sim.positions()[w];
      total += static_cast<long>(before.size());
    }
    const double f = stay_prob(n, p);
    // Walkers share a graph, so the SE is inflated by at most sqrt(M).
    const double se = std::sqrt(f * (1 - f) / total) * std::sqrt(4.0);
    CHECK(std::abs(stays / double(total) - f) < 3 * se);
  }
}

TEST_CASE("stationary marginal mean is M/n at every vertex") {
  SimConfig cfg;
  cfg.dims = {4, 8};
  cfg.p = 0.5;
  cfg.T = 40000;
  cfg.seed = 31;
  const auto s = simulate(cfg);
  // Batch means give an SE that accounts for autocorrelation.
  const int batches = 40, len = cfg.T / batches;
  for (int i = 0; i < cfg.dims.n; ++i) {
    std::vector<double> means;
    for (int b = 0; b < batches; ++b)
      means.push_back(s.counts.col(i).segment(b * len, len).cast<double>().mean());
    double mu = 0.0;
    for (double v : means) mu += v;
    mu /= batches;
    double ss = 0.0;
    for (double v : means) ss += (v - mu) * (v - mu);
    const double se = std::sqrt(ss / (batches - 1) / batches);
    CHECK(std::abs(mu - 2.0) < 3 * se);
  }
}
