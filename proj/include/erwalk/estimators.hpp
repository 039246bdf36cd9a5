#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "erwalk/inversion.hpp"
#include "erwalk/simulator.hpp"

namespace erwalk {

/// Window averages of an ObservationSeries.
///
/// Means run over all T rows with divisor T. Lag-1 products
/// N_{i,t} = M_{i,t} M_{i,t+1} and squares M_{i,t}^2 run over t = 1..T-1
/// with divisor T-1, so every product uses observed rows only.
struct SummaryStats {
  ModelDims dims;
  int T = 0;
  Eigen::VectorXd mean_counts;
  Eigen::VectorXd lag1_products;
  Eigen::VectorXd squares;
  /// Exact integer totals sum_i sum_{t<T} N_{i,t} and sum_i sum_{t<T} M_{i,t}^2.
  std::int64_t lag1_total = 0;
  std::int64_t square_total = 0;
  double c_hat = 0.0;             ///< empirical lag-1 covariance, sample means
  double c_hat_known_mean = 0.0;  ///< same with E[M_i] = M/n plugged in
  std::optional<int> burn_in;
};

SummaryStats summarize(const ObservationSeries& series);

enum class Method { mom, mom_known_mean, ls };

std::string_view to_string(Method m);
/// Accepts "mom", "mom-known-mean", "ls".
Method parse_method(std::string_view name);

struct EstimationReport {
  Method method = Method::mom;
  double p_hat = 0.0;
  double statistic = 0.0;  ///< the inverted scalar: c_hat, c_hat', or the LS ratio
  Clamp clamped = Clamp::none;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  double tol = 1e-10;
  std::optional<int> burn_in;
};

inline constexpr double kDefaultMomLo = 1e-6;
inline constexpr double kDefaultTol = 1e-10;

/// Method-of-moments: solves c(p) = statistic on [lo, hi].
EstimationReport estimate_mom_from_statistic(const ModelDims& dims, double statistic,
                                             double lo = kDefaultMomLo, double hi = 1.0,
                                             double tol = kDefaultTol);

/// Method-of-moments from a series summary. Assumes the series is stationary.
EstimationReport estimate_mom(const SummaryStats& stats, Method variant = Method::mom,
                              double lo = kDefaultMomLo, double hi = 1.0,
                              double tol = kDefaultTol);

/// Least squares: solves I(p) = ratio on [0, 1] after clamping the ratio
/// into [0, 1]. The clamp is reported, never silent.
EstimationReport estimate_ls_from_ratio(int n, double ratio, double tol = kDefaultTol);

/// The LS ratio (n sum N - M^2) / (n sum N° - M^2), computed from exact
/// integer totals. Throws DegenerateInputError when the denominator is 0.
double ls_ratio(const SummaryStats& stats);

EstimationReport estimate_ls(const SummaryStats& stats, double tol = kDefaultTol);

/// Dispatch on method with default brackets.
EstimationReport estimate(const SummaryStats& stats, Method method, double tol = kDefaultTol);

}  // namespace erwalk
