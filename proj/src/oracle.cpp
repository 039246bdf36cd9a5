#include "erwalk/oracle.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

namespace erwalk::oracle {

namespace {

void require_small(int n) {
  if (n < 2) throw DomainError("oracle needs n >= 2");
  if (n > kMaxVertices)
    throw SizeError("exhaustive oracle is limited to n <= " + std::to_string(kMaxVertices) +
                    ", got " + std::to_string(n));
}

}  // namespace

std::vector<WeightedGraph> enumerate_graphs(int n, double p) {
  require_small(n);
  detail::require_prob(p);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const int e = static_cast<int>(pairs.size());

  std::vector<WeightedGraph> out;
  out.reserve(std::size_t{1} << e);
  for (unsigned mask = 0; mask < (1u << e); ++mask) {
    GraphSample g(n);
    int present = 0;
    for (int k = 0; k < e; ++k) {
      if (mask >> k & 1u) {
        g.set_edge(pairs[k].first, pairs[k].second, true);
        ++present;
      }
    }
    const double w = std::pow(p, present) * std::pow(1.0 - p, e - present);
    out.push_back({std::move(g), w});
  }
  return out;
}

Eigen::MatrixXd walker_transition(const GraphSample& g) {
  const int n = g.n();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double share = 1.0 / (g.degree(i) + 1);
    P(i, i) = share;
    for (int j : g.neighbors(i)) P(i, j) = share;
  }
  return P;
}

Eigen::MatrixXd single_walker_kernel(int n, double p) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [g, w] : enumerate_graphs(n, p)) K += w * walker_transition(g);
  return K;
}

Eigen::VectorXd stationary(const Eigen::MatrixXd& kernel) {
  const Eigen::Index s = kernel.rows();
  Eigen::MatrixXd A = kernel.transpose() - Eigen::MatrixXd::Identity(s, s);
  A.row(s - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s);
  rhs[s - 1] = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible())
    throw NumericalError("stationary system is singular (chain not irreducible)");
  return lu.solve(rhs);
}

double PairChain::pi_eq() const {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += stationary[index(n, i, i)];
  return acc / n;
}

double PairChain::pi_neq() const {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) acc += stationary[index(n, i, j)];
  return acc / (n * (n - 1));
}

PairChain build_pair_chain(int n, double p) {
  PairChain chain;
  chain.n = n;
  chain.p = p;
  const int s = n * n;
  chain.kernel = Eigen::MatrixXd::Zero(s, s);
  // Walkers move independently given the shared graph.
  for (const auto& [g, w] : enumerate_graphs(n, p)) {
    const Eigen::MatrixXd P = walker_transition(g);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int a2 = 0; a2 < n; ++a2)
          for (int b2 = 0; b2 < n; ++b2)
            chain.kernel(PairChain::index(n, a, b), PairChain::index(n, a2, b2)) +=
                w * P(a, a2) * P(b, b2);
  }
  chain.stationary = stationary(chain.kernel);
  return chain;
}

ScenarioProbs<double> exact_scenarios(int n, double p) {
  const int i = 0, j = 1, j2 = 2;
  ScenarioProbs<double> s;
  for (const auto& [g, w] : enumerate_graphs(n, p)) {
    const Eigen::MatrixXd P = walker_transition(g);
    s.pi1 += w * P(i, i) * P(i, i);
    s.pi2 += w * P(i, i) * P(j, i);
    s.pi3 += w * P(j, i) * P(j, i);
    if (n >= 3) s.pi4 += w * P(j, i) * P(j2, i);
  }
  if (n == 2) s.pi4 = p * s.pi2;
  return s;
}

double exact_lag1_cov(int n, int m, double p) {
  if (m < 1) throw DomainError("M must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("exact lag-1 covariance needs p in (0, 1]");
  const Eigen::MatrixXd K1 = single_walker_kernel(n, p);
  const Eigen::VectorXd pi1 = stationary(K1);
  const PairChain chain = build_pair_chain(n, p);

  const int v = 0;
  // Same walker at v on consecutive steps.
  const double self = pi1[v] * K1(v, v);
  // Walker 1 at v now, walker 2 at v next step.
  double cross = 0.0;
  for (int b = 0; b < n; ++b) {
    const double mass = chain.stationary[PairChain::index(n, v, b)];
    for (int a2 = 0; a2 < n; ++a2)
      cross += mass * chain.kernel(PairChain::index(n, v, b), PairChain::index(n, a2, v));
  }
  const double mean = m * pi1[v];
  return m * self + double(m) * (m - 1) * cross - mean * mean;
}

}  // namespace erwalk::oracle
