#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "erwalk/estimators.hpp"

namespace erwalk {

struct StudyConfig {
  ModelDims dims{7, 14};
  int T = 4000;
  int burn_in = 1000;
  int R = 200;
  std::vector<double> p_grid{0.25, 0.5, 0.75};
  std::uint64_t base_seed = 1;
  std::vector<Method> methods{Method::mom, Method::mom_known_mean, Method::ls};
  double fd_step = 1e-5;
  double tol = kDefaultTol;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

/// Preset mirroring the published experiment: n=7, M=14, T=4000, R=2000.
StudyConfig paper_s6_preset();
/// Nine-point grid 0.1, ..., 0.9 used for the comparison curves.
std::vector<double> curve_grid();

struct ReplicationRow {
  double p_true = 0.0;
  Method method = Method::mom;
  int rep = 0;  ///< 1-based
  std::uint64_t seed = 0;
  double p_hat = 0.0;
  double statistic = 0.0;
  Clamp clamped = Clamp::none;

  bool operator==(const ReplicationRow&) const = default;
};

/// Rows ordered by (p_grid index, method order, rep).
struct ReplicationTable {
  ModelDims dims;
  int T = 0;
  std::vector<ReplicationRow> rows;

  std::vector<const ReplicationRow*> select(double p, Method method) const;
};

/// One simulated series per (p, rep), shared by every requested method.
/// Output does not depend on the number of threads.
ReplicationTable run_replications(const StudyConfig& cfg);

/// Spread of one estimator at one p, clamped replications excluded.
struct EstimatorSpread {
  double sd = 0.0;  ///< sample sd of p_hat
  double mean = 0.0;
  int n_used = 0;
  int n_clamped = 0;
};

EstimatorSpread estimator_spread(const ReplicationTable& table, double p, Method method);

struct SigmaEstimate {
  double sigma_c = 0.0;  ///< |c'(p)| sd(sqrt(T)(p_hat - p))
  double sigma_I = 0.0;  ///< |I'(p)| sd(sqrt(T)(p_bar - p))
  EstimatorSpread mom;
  EstimatorSpread ls;
};

/// Inverts the delta-method variances of the two estimators. Needs at least
/// 30 unclamped replications of both "mom" and "ls" at p.
SigmaEstimate empirical_sigmas(const ReplicationTable& table, double p, double fd_step = 1e-5);

struct QQResult {
  std::vector<std::pair<double, double>> points;  ///< (theoretical, empirical)
  double correlation = 0.0;
};

/// Standard-normal QQ data for samples standardised by their own mean and
/// sd, plotting positions (k - 0.5)/R.
QQResult qq_data(std::vector<double> samples);

struct SensitivityPoint {
  double p = 0.0;
  double lambda = 0.0;  ///< c'(p) / I'(p)
  double mu = 0.0;      ///< sigma_I / sigma_c
  double nu = 0.0;      ///< lambda * mu
  double sd_mom = 0.0;
  double sd_ls = 0.0;
  int n_clamped_mom = 0;
  int n_clamped_ls = 0;
};

std::vector<SensitivityPoint> sensitivity_curves(const ReplicationTable& table,
                                                 const std::vector<double>& p_grid,
                                                 double fd_step = 1e-5);
/// Runs the replications (methods forced to mom and ls) and builds the curves.
std::vector<SensitivityPoint> sensitivity_curves(StudyConfig cfg);

}  // namespace erwalk
