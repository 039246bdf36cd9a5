#pragma once

// Text formats: CSV for series and study tables, JSON for single reports.
// Floating-point CSV cells use 17 significant digits so a re-read value is
// bit-identical to the one written.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "erwalk/estimators.hpp"
#include "erwalk/oracle.hpp"
#include "erwalk/study.hpp"

namespace erwalk::io {

std::string format_double(double x);

/// Header `t,v1,...,vn`, one integer row per time step (t from 1).
void write_series_csv(std::ostream& os, const ObservationSeries& series);
/// Parses the series CSV; n comes from the header. M is checked against
/// every row sum when given, otherwise read off the first row.
ObservationSeries read_series_csv(std::istream& is, int expected_m = 0);

/// Header `p_true,method,rep,seed,p_hat,statistic,clamped`.
void write_replication_csv(std::ostream& os, const ReplicationTable& table);
ReplicationTable read_replication_csv(std::istream& is, const ModelDims& dims, int T);

/// Header `p,lambda,mu,nu,sd_mom,sd_ls,n_clamped_mom,n_clamped_ls`.
void write_curves_csv(std::ostream& os, const std::vector<SensitivityPoint>& curve);
std::vector<SensitivityPoint> read_curves_csv(std::istream& is);

/// Header `theoretical_q,empirical_q`.
void write_qq_csv(std::ostream& os, const QQResult& qq);

nlohmann::ordered_json to_json(const EstimationReport& report);
nlohmann::ordered_json to_json(const MomentProfile<double>& profile);

struct OracleSummary {
  ScenarioProbs<double> scenarios;
  double kappa_implied = 0.0;
  double pi_eq = 0.0;
  double pi_neq = 0.0;
  double c_exact = 0.0;
};

OracleSummary oracle_summary(int n, int m, double p);
nlohmann::ordered_json to_json(const OracleSummary& summary);

}  // namespace erwalk::io
