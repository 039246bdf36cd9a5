#pragma once

// Exhaustive small-instance ground truth. Everything here is computed by
// summing over all 2^{n(n-1)/2} graphs and solving Markov chains exactly; no
// closed form from moments.hpp is used.

#include <vector>

#include <Eigen/Core>

#include "erwalk/moments.hpp"
#include "erwalk/simulator.hpp"

namespace erwalk::oracle {

inline constexpr int kMaxVertices = 4;

struct WeightedGraph {
  GraphSample graph;
  double weight;  ///< p^{edges} (1-p)^{non-edges}
};

std::vector<WeightedGraph> enumerate_graphs(int n, double p);

/// Row-stochastic one-step matrix of a single walker on a fixed graph.
Eigen::MatrixXd walker_transition(const GraphSample& g);

/// Graph-averaged single-walker kernel.
Eigen::MatrixXd single_walker_kernel(int n, double p);

/// Stationary row vector of a row-stochastic matrix: solves pi (K - I) = 0
/// with one equation replaced by sum(pi) = 1. Throws NumericalError when
/// the system is singular.
Eigen::VectorXd stationary(const Eigen::MatrixXd& kernel);

/// Two walkers on the same graph sequence. State (a, b) has index a*n + b.
struct PairChain {
  int n = 0;
  double p = 0.0;
  Eigen::MatrixXd kernel;      ///< n^2 x n^2
  Eigen::VectorXd stationary;  ///< length n^2

  static int index(int n, int a, int b) { return a * n + b; }
  /// P(X1 = X2 = i), averaged over i.
  double pi_eq() const;
  /// P(X1 = i, X2 = j), averaged over ordered i != j.
  double pi_neq() const;
};

PairChain build_pair_chain(int n, double p);

/// Scenario probabilities read off the enumerated graphs, with target vertex
/// 0 and sources 1, 2. For n = 2, pi4 is reported as p * pi2 (the scenario
/// needs three vertices).
ScenarioProbs<double> exact_scenarios(int n, double p);

/// Exact stationary Cov(M_{i,t}, M_{i,t+1}) for M walkers, from one- and
/// two-walker laws.
double exact_lag1_cov(int n, int m, double p);

}  // namespace erwalk::oracle
