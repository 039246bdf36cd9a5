#pragma once

// Closed-form moment functions of the resampled Erdos-Renyi walker model.
//
// Every function is pure and templated on the floating-point scalar so the
// same expressions can be evaluated in double or long double. Vertices are
// counted by n >= 2, walkers by M >= 1 and p is the per-step edge
// probability.

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "erwalk/errors.hpp"

namespace erwalk {

struct ModelDims {
  int n = 2;  ///< vertices
  int m = 1;  ///< walkers

  void validate() const {
    if (n < 2) throw DomainError("n must be >= 2, got " + std::to_string(n));
    if (m < 1) throw DomainError("M must be >= 1, got " + std::to_string(m));
  }
};

namespace detail {

inline void require_vertices(int n) {
  if (n < 2) throw DomainError("n must be >= 2, got " + std::to_string(n));
}

template <std::floating_point Scalar>
void require_prob(Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1)))
    throw DomainError("p must lie in [0, 1], got " + std::to_string(double(p)));
}

template <std::floating_point Scalar>
void require_positive_prob(Scalar p) {
  if (!(p > Scalar(0) && p <= Scalar(1)))
    throw DomainError("p must lie in (0, 1], got " + std::to_string(double(p)));
}

// 1 - (1-p)^n without cancellation for small p.
template <std::floating_point Scalar>
Scalar one_minus_q_pow(int n, Scalar p) {
  using std::expm1, std::log1p, std::pow;
  if (p < Scalar(0.5)) return -expm1(Scalar(n) * log1p(-p));
  return Scalar(1) - pow(Scalar(1) - p, n);
}

}  // namespace detail

/// P(Bin(n, p) = k).
template <std::floating_point Scalar>
Scalar binom_pmf(int n, int k, Scalar p) {
  if (n < 0) throw DomainError("binomial size must be >= 0");
  if (k < 0 || k > n)
    throw DomainError("binomial outcome k=" + std::to_string(k) + " outside [0, " +
                      std::to_string(n) + "]");
  detail::require_prob(p);
  const int kk = k < n - k ? k : n - k;
  Scalar coef(1);
  for (int j = 1; j <= kk; ++j) coef = coef * Scalar(n - kk + j) / Scalar(j);
  using std::pow;
  return coef * pow(p, k) * pow(Scalar(1) - p, n - k);
}

/// E[f(K)] for K ~ Bin(n, p).
template <std::floating_point Scalar, class Fn>
Scalar binom_expect(int n, Scalar p, Fn&& f) {
  Scalar acc(0);
  for (int k = 0; k <= n; ++k) acc += binom_pmf(n, k, p) * f(Scalar(k));
  return acc;
}

/// Probability that a walker stays put during one step, F_n(p).
template <std::floating_point Scalar>
Scalar stay_prob(int n, Scalar p) {
  detail::require_vertices(n);
  detail::require_prob(p);
  if (p == Scalar(0)) return Scalar(1);
  const Scalar np = Scalar(n) * p;
  if (np < Scalar(1e-8)) {
    const Scalar a = Scalar(n - 1), b = Scalar(n - 2);
    return Scalar(1) - a * p / Scalar(2) + a * b * p * p / Scalar(6);
  }
  return detail::one_minus_q_pow(n, p) / np;
}

/// dF/dp = -(n-1) E[1/((K+1)(K+2))], K ~ Bin(n-2, p). Valid on all of [0, 1].
template <std::floating_point Scalar>
Scalar stay_prob_deriv(int n, Scalar p) {
  detail::require_vertices(n);
  detail::require_prob(p);
  return -Scalar(n - 1) *
         binom_expect(n - 2, p, [](Scalar k) { return Scalar(1) / ((k + 1) * (k + 2)); });
}

/// Probability of moving to one specific other vertex, G_n(p).
template <std::floating_point Scalar>
Scalar move_prob(int n, Scalar p) {
  return (Scalar(1) - stay_prob(n, p)) / Scalar(n - 1);
}

/// Slope I(p) = (nF - 1)/(n - 1) of the conditional mean E[M_{t+1} | M_t].
template <std::floating_point Scalar>
Scalar ls_slope(int n, Scalar p) {
  return (Scalar(n) * stay_prob(n, p) - Scalar(1)) / Scalar(n - 1);
}

template <std::floating_point Scalar>
Scalar ls_slope_deriv(int n, Scalar p) {
  return Scalar(n) * stay_prob_deriv(n, p) / Scalar(n - 1);
}

/// Intercept factor J(p) = (1 - I)/n.
template <std::floating_point Scalar>
Scalar ls_intercept(int n, Scalar p) {
  return (Scalar(1) - ls_slope(n, p)) / Scalar(n);
}

/// One-step probabilities that two tagged walkers end at a given vertex i,
/// conditioned on where they started:
///   pi1: both at i;  pi2: one at i, the other at j;
///   pi3: both at j;  pi4: one at j, the other at j' (i, j, j' distinct).
template <std::floating_point Scalar>
struct ScenarioProbs {
  Scalar pi1{}, pi2{}, pi3{}, pi4{};
};

/// Scenario probabilities by conditioning on the fresh graph.
///
/// pi4 conditions on the edge (j, j'), which enters the degree of both source
/// vertices. For n = 2 the fourth scenario cannot occur (its weight in every
/// balance equation is (n-1)(n-2) = 0); pi4 is then reported as p * pi2.
template <std::floating_point Scalar>
ScenarioProbs<Scalar> scenario_probs(int n, Scalar p) {
  detail::require_vertices(n);
  detail::require_prob(p);
  ScenarioProbs<Scalar> s;
  s.pi1 = binom_expect(n - 1, p, [](Scalar k) { return Scalar(1) / ((k + 1) * (k + 1)); });
  const Scalar reach =
      binom_expect(n - 2, p, [](Scalar k) { return Scalar(1) / (k + 2); });
  s.pi2 = p * reach * reach;
  s.pi3 = p * binom_expect(n - 2, p, [](Scalar k) { return Scalar(1) / ((k + 2) * (k + 2)); });
  if (n == 2) {
    s.pi4 = p * s.pi2;
  } else {
    // K ~ Bin(n-3, p) counts neighbours outside {i, j, j'}.
    const Scalar with_edge =
        binom_expect(n - 3, p, [](Scalar k) { return Scalar(1) / (k + 3); });
    const Scalar without_edge =
        binom_expect(n - 3, p, [](Scalar k) { return Scalar(1) / (k + 2); });
    s.pi4 = p * p * (p * with_edge * with_edge + (Scalar(1) - p) * without_edge * without_edge);
  }
  return s;
}

/// Scenario probabilities with pi4 = p^2 E[1/(K+2)]^2, K ~ Bin(n-2, p), i.e.
/// treating the degrees of j and j' as independent. Disagrees with exhaustive
/// enumeration for n >= 3 and 0 < p < 1; kept for comparison only.
template <std::floating_point Scalar>
ScenarioProbs<Scalar> scenario_probs_product_form(int n, Scalar p) {
  ScenarioProbs<Scalar> s = scenario_probs(n, p);
  s.pi4 = p * s.pi2;
  return s;
}

/// kappa(p) = Pi_eq / Pi_neq from the stationary pair balance at one vertex.
template <std::floating_point Scalar>
Scalar kappa_from(int n, const ScenarioProbs<Scalar>& s, Scalar p) {
  // 1 - pi1 summed termwise to keep precision near p = 0.
  const Scalar leave =
      binom_expect(n - 1, p, [](Scalar k) { return Scalar(1) - Scalar(1) / ((k + 1) * (k + 1)); });
  const Scalar denom = leave - Scalar(n - 1) * s.pi3;
  if (!(denom >= Scalar(1e-13)))
    throw NumericalError("kappa denominator " + std::to_string(double(denom)) +
                         " below 1e-13 at p=" + std::to_string(double(p)));
  const Scalar num = Scalar(2 * (n - 1)) * s.pi2 + Scalar((n - 1) * (n - 2)) * s.pi4;
  return num / denom;
}

template <std::floating_point Scalar>
Scalar kappa(int n, Scalar p) {
  detail::require_vertices(n);
  detail::require_positive_prob(p);
  return kappa_from(n, scenario_probs(n, p), p);
}

template <std::floating_point Scalar>
struct OccupancyPair {
  Scalar eq{};   ///< P(X1 = X2 = i)
  Scalar neq{};  ///< P(X1 = i, X2 = j), i != j
};

template <std::floating_point Scalar>
OccupancyPair<Scalar> occupancy_from_kappa(int n, Scalar k) {
  const Scalar scale = Scalar(n) * (Scalar(n - 1) + k);
  return {k / scale, Scalar(1) / scale};
}

template <std::floating_point Scalar>
OccupancyPair<Scalar> occupancy_pair_probs(int n, Scalar p) {
  return occupancy_from_kappa(n, kappa(n, p));
}

/// Stationary E[M_{i,t}^2] = M/n + M(M-1) Pi_eq.
template <std::floating_point Scalar>
Scalar second_moment(const ModelDims& dims, Scalar p) {
  dims.validate();
  const Scalar eq = occupancy_pair_probs(dims.n, p).eq;
  const Scalar m = Scalar(dims.m), n = Scalar(dims.n);
  return m / n + m * (m - Scalar(1)) * eq;
}

/// Stationary lag-1 autocovariance c(p) = Cov(M_{i,t}, M_{i,t+1}).
template <std::floating_point Scalar>
Scalar lag1_cov(const ModelDims& dims, Scalar p) {
  const Scalar m2 = second_moment(dims, p);
  const Scalar f = stay_prob(dims.n, p), g = move_prob(dims.n, p);
  const Scalar m = Scalar(dims.m), n = Scalar(dims.n);
  return (f - g) * m2 + g * m * m / n - m * m / (n * n);
}

/// A grid step on which c(p) fails to decrease.
struct MonotonicityViolation {
  double p_lo, p_hi;
  double c_lo, c_hi;
};

/// Scans c on `points` equal steps of [lo, 1] and lists every step where it
/// does not decrease. Empty means the method-of-moments inverse is well
/// defined on that grid; for some (n, M), e.g. n=10, M=50, c rises at small p.
inline std::vector<MonotonicityViolation> lag1_cov_violations(const ModelDims& dims,
                                                              int points = 1000,
                                                              double lo = 1e-6) {
  if (points < 1) throw DomainError("monotonicity scan needs at least one step");
  std::vector<MonotonicityViolation> out;
  double p_prev = lo, c_prev = lag1_cov(dims, lo);
  for (int k = 1; k <= points; ++k) {
    const double p = k == points ? 1.0 : lo + (1.0 - lo) * k / points;
    const double c = lag1_cov(dims, p);
    if (!(c < c_prev)) out.push_back({p_prev, p, c_prev, c});
    p_prev = p;
    c_prev = c;
  }
  return out;
}

/// Every closed-form quantity at one (n, M, p). Pair-dependent fields are
/// empty at p = 0, where the pair balance is 0/0.
template <std::floating_point Scalar>
struct MomentProfile {
  ModelDims dims;
  Scalar p{};
  Scalar F{}, G{};
  ScenarioProbs<Scalar> scenarios;
  std::optional<Scalar> kappa, pi_eq, pi_neq, m2, c;
  Scalar I{}, J{};
};

template <std::floating_point Scalar>
MomentProfile<Scalar> moment_profile(const ModelDims& dims, Scalar p) {
  dims.validate();
  detail::require_prob(p);
  MomentProfile<Scalar> out;
  out.dims = dims;
  out.p = p;
  out.F = stay_prob(dims.n, p);
  out.G = move_prob(dims.n, p);
  out.scenarios = scenario_probs(dims.n, p);
  out.I = ls_slope(dims.n, p);
  out.J = ls_intercept(dims.n, p);
  if (p > Scalar(0)) {
    const Scalar k = kappa_from(dims.n, out.scenarios, p);
    const auto occ = occupancy_from_kappa(dims.n, k);
    const Scalar m = Scalar(dims.m), n = Scalar(dims.n);
    out.kappa = k;
    out.pi_eq = occ.eq;
    out.pi_neq = occ.neq;
    out.m2 = m / n + m * (m - Scalar(1)) * occ.eq;
    out.c = (out.F - out.G) * *out.m2 + out.G * m * m / n - m * m / (n * n);
  }
  return out;
}

enum class Quantity { c, I, F, kappa };

template <std::floating_point Scalar>
Scalar evaluate(Quantity q, const ModelDims& dims, Scalar p) {
  switch (q) {
    case Quantity::c: return lag1_cov(dims, p);
    case Quantity::I: return ls_slope(dims.n, p);
    case Quantity::F: return stay_prob(dims.n, p);
    case Quantity::kappa: return kappa(dims.n, p);
  }
  throw DomainError("unknown quantity");
}

/// Central finite difference (f(p+h) - f(p-h)) / 2h. The stencil must stay
/// inside (0, 1].
template <std::floating_point Scalar>
Scalar derivative(Quantity q, const ModelDims& dims, Scalar p, Scalar step = Scalar(1e-5)) {
  if (!(step > Scalar(0))) throw DomainError("finite-difference step must be > 0");
  if (!(p - step > Scalar(0) && p + step <= Scalar(1)))
    throw DomainError("finite-difference stencil around p=" + std::to_string(double(p)) +
                      " leaves (0, 1]");
  return (evaluate(q, dims, p + step) - evaluate(q, dims, p - step)) / (Scalar(2) * step);
}

}  // namespace erwalk
