#include "erwalk/estimators.hpp"

#include <string>

#include "erwalk/moments.hpp"

namespace erwalk {

SummaryStats summarize(const ObservationSeries& series) {
  series.validate();
  const int T = series.T();
  if (T < 2) throw DomainError("summary needs T >= 2, got " + std::to_string(T));
  const int n = series.dims.n;
  const auto& m = series.counts;

  SummaryStats s;
  s.dims = series.dims;
  s.T = T;
  s.burn_in = series.burn_in;

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> col_sum(n), prod_sum(n), sq_sum(n);
  col_sum.setZero();
  prod_sum.setZero();
  sq_sum.setZero();
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      const std::int64_t x = m(t, i);
      col_sum[i] += x;
      if (t + 1 < T) {
        prod_sum[i] += x * m(t + 1, i);
        sq_sum[i] += x * x;
      }
    }
  }
  s.lag1_total = prod_sum.sum();
  s.square_total = sq_sum.sum();
  s.mean_counts = col_sum.cast<double>() / double(T);
  s.lag1_products = prod_sum.cast<double>() / double(T - 1);
  s.squares = sq_sum.cast<double>() / double(T - 1);

  const double known = double(series.dims.m) / double(n);
  s.c_hat = (s.lag1_products.array() - s.mean_counts.array().square()).mean();
  s.c_hat_known_mean = s.lag1_products.mean() - known * known;
  return s;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::mom: return "mom";
    case Method::mom_known_mean: return "mom-known-mean";
    case Method::ls: return "ls";
  }
  return "mom";
}

Method parse_method(std::string_view name) {
  if (name == "mom") return Method::mom;
  if (name == "mom-known-mean") return Method::mom_known_mean;
  if (name == "ls") return Method::ls;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

EstimationReport estimate_mom_from_statistic(const ModelDims& dims, double statistic, double lo,
                                             double hi, double tol) {
  dims.validate();
  if (!(lo > 0.0 && hi <= 1.0))
    throw DomainError("method-of-moments bracket must lie in (0, 1]");
  const auto inv = invert_monotone_decreasing(
      statistic, [&](double p) { return lag1_cov(dims, p); }, lo, hi, tol);
  EstimationReport r;
  r.method = Method::mom;
  r.p_hat = inv.p;
  r.statistic = statistic;
  r.clamped = inv.clamped;
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.tol = tol;
  return r;
}

EstimationReport estimate_mom(const SummaryStats& stats, Method variant, double lo, double hi,
                              double tol) {
  if (variant == Method::ls) throw DomainError("estimate_mom called with the LS method");
  const double stat = variant == Method::mom ? stats.c_hat : stats.c_hat_known_mean;
  EstimationReport r = estimate_mom_from_statistic(stats.dims, stat, lo, hi, tol);
  r.method = variant;
  r.burn_in = stats.burn_in;
  return r;
}

EstimationReport estimate_ls_from_ratio(int n, double ratio, double tol) {
  detail::require_vertices(n);
  if (std::isnan(ratio)) throw DomainError("LS ratio is NaN");
  EstimationReport r;
  r.method = Method::ls;
  r.statistic = ratio;
  r.bracket_lo = 0.0;
  r.bracket_hi = 1.0;
  r.tol = tol;
  // I(0) = 1 and I(1) = 0, so the clamp below is exactly the inverter's.
  if (ratio > 1.0) {
    r.p_hat = 0.0;
    r.clamped = Clamp::low;
    return r;
  }
  if (ratio < 0.0) {
    r.p_hat = 1.0;
    r.clamped = Clamp::high;
    return r;
  }
  const auto inv = invert_monotone_decreasing(
      ratio, [n](double p) { return ls_slope(n, p); }, 0.0, 1.0, tol);
  r.p_hat = inv.p;
  r.clamped = inv.clamped;
  return r;
}

double ls_ratio(const SummaryStats& stats) {
  const std::int64_t n = stats.dims.n, m = stats.dims.m, w = stats.T - 1;
  const std::int64_t num = n * stats.lag1_total - w * m * m;
  const std::int64_t den = n * stats.square_total - w * m * m;
  if (den == 0)
    throw DegenerateInputError(
        "least-squares denominator is zero: counts are uniform and constant, p is not "
        "identifiable");
  return double(num) / double(den);
}

EstimationReport estimate_ls(const SummaryStats& stats, double tol) {
  EstimationReport r = estimate_ls_from_ratio(stats.dims.n, ls_ratio(stats), tol);
  r.burn_in = stats.burn_in;
  return r;
}

EstimationReport estimate(const SummaryStats& stats, Method method, double tol) {
  if (method == Method::ls) return estimate_ls(stats, tol);
  return estimate_mom(stats, method, kDefaultMomLo, 1.0, tol);
}

}  // namespace erwalk
