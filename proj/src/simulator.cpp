#include "erwalk/simulator.hpp"

#include <string>

namespace erwalk {

GraphSample::GraphSample(int n) : n_(n), adj_(n, n), degree_(n, 0) {
  if (n < 2) throw DomainError("graph needs n >= 2");
  adj_.setZero();
}

void GraphSample::set_edge(int i, int j, bool present) {
  if (i == j) throw DomainError("self-loops are not allowed");
  const bool had = has_edge(i, j);
  if (had == present) return;
  adj_(i, j) = adj_(j, i) = present ? 1 : 0;
  const int delta = present ? 1 : -1;
  degree_[i] += delta;
  degree_[j] += delta;
}

std::vector<int> GraphSample::neighbors(int i) const {
  std::vector<int> out;
  out.reserve(degree_[i]);
  for (int j = 0; j < n_; ++j)
    if (adj_(i, j)) out.push_back(j);
  return out;
}

int GraphSample::edge_count() const {
  int twice = 0;
  for (int d : degree_) twice += d;
  return twice / 2;
}

GraphSample sample_graph(int n, double p, Rng& rng) {
  GraphSample g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) g.set_edge(i, j, true);
  return g;
}

void step(WalkerPositions& positions, const GraphSample& g, Rng& rng) {
  const int n = g.n();
  // CSR neighbour table rebuilt from the fresh graph.
  std::vector<int> offset(n + 1, 0);
  for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + g.degree(i);
  std::vector<int> nbr(offset[n]);
  for (int i = 0, k = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i && g.has_edge(i, j)) nbr[k++] = j;

  for (int& x : positions) {
    const int k = offset[x + 1] - offset[x];
    const int choice = uniform_index(rng, k + 1);
    if (choice > 0) x = nbr[offset[x] + choice - 1];
  }
}

void SimConfig::validate() const {
  dims.validate();
  detail::require_prob(p);
  if (T < 2) throw DomainError("T must be >= 2, got " + std::to_string(T));
  if (burn_in < 0) throw DomainError("burn_in must be >= 0");
  if (init == InitMode::explicit_positions) {
    if (static_cast<int>(positions.size()) != dims.m)
      throw DomainError("explicit positions must list exactly M walkers");
    for (int x : positions)
      if (x < 0 || x >= dims.n) throw DomainError("walker position out of range");
  }
}

void ObservationSeries::validate() const {
  dims.validate();
  if (counts.cols() != dims.n)
    throw DomainError("series has " + std::to_string(counts.cols()) + " columns, expected " +
                      std::to_string(dims.n));
  if ((counts.array() < 0).any()) throw DomainError("negative occupancy count");
  for (Eigen::Index t = 0; t < counts.rows(); ++t)
    if (counts.row(t).sum() != dims.m)
      throw DomainError("row " + std::to_string(t + 1) + " does not sum to M=" +
                        std::to_string(dims.m));
}

Simulator::Simulator(const SimConfig& cfg) : dims_(cfg.dims), p_(cfg.p), rng_(cfg.seed) {
  cfg.validate();
  switch (cfg.init) {
    case InitMode::uniform_random:
      positions_.resize(dims_.m);
      for (int& x : positions_) x = uniform_index(rng_, dims_.n);
      break;
    case InitMode::all_at_first:
      positions_.assign(dims_.m, 0);
      break;
    case InitMode::explicit_positions:
      positions_ = cfg.positions;
      break;
  }
}

void Simulator::advance() {
  const GraphSample g = sample_graph(dims_.n, p_, rng_);
  step(positions_, g, rng_);
}

Eigen::VectorXi Simulator::counts() const {
  Eigen::VectorXi c = Eigen::VectorXi::Zero(dims_.n);
  for (int x : positions_) ++c[x];
  return c;
}

ObservationSeries simulate(const SimConfig& cfg) {
  Simulator sim(cfg);
  for (int s = 0; s < cfg.burn_in; ++s) sim.advance();
  ObservationSeries out;
  out.dims = cfg.dims;
  out.burn_in = cfg.burn_in;
  out.counts.setZero(cfg.T, cfg.dims.n);
  for (int t = 0; t < cfg.T; ++t) {
    if (t > 0) sim.advance();
    for (int x : sim.positions()) ++out.counts(t, x);
  }
  return out;
}

}  // namespace erwalk
