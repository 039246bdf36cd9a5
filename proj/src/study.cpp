#include "erwalk/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "erwalk/moments.hpp"

namespace erwalk {

void StudyConfig::validate() const {
  dims.validate();
  if (T < 2) throw DomainError("T must be >= 2");
  if (burn_in < 0) throw DomainError("burn_in must be >= 0");
  if (R < 2) throw DomainError("R must be >= 2");
  if (p_grid.empty()) throw DomainError("p grid is empty");
  for (double p : p_grid)
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("p grid values must lie in (0, 1]");
  if (methods.empty()) throw DomainError("no estimation method requested");
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be > 0");
  if (!(tol > 0.0)) throw DomainError("tol must be > 0");
}

StudyConfig paper_s6_preset() {
  StudyConfig cfg;
  cfg.dims = {7, 14};
  cfg.T = 4000;
  cfg.burn_in = 1000;
  cfg.R = 2000;
  cfg.p_grid = {0.25, 0.5, 0.75};
  return cfg;
}

std::vector<double> curve_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<const ReplicationRow*> ReplicationTable::select(double p, Method method) const {
  std::vector<const ReplicationRow*> out;
  for (const auto& row : rows)
    if (row.p_true == p && row.method == method) out.push_back(&row);
  return out;
}

ReplicationTable run_replications(const StudyConfig& cfg) {
  cfg.validate();
  const std::size_t n_p = cfg.p_grid.size();
  const std::size_t n_m = cfg.methods.size();
  const std::size_t R = static_cast<std::size_t>(cfg.R);

  ReplicationTable table;
  table.dims = cfg.dims;
  table.T = cfg.T;
  table.rows.resize(n_p * n_m * R);

  // Task k covers grid point k / R, replication k % R + 1.
  const std::size_t tasks = n_p * R;
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_task = tasks;

  auto worker = [&] {
    for (std::size_t k = next++; k < tasks; k = next++) {
      const std::size_t ip = k / R;
      const int rep = static_cast<int>(k % R) + 1;
      try {
        SimConfig sim;
        sim.dims = cfg.dims;
        sim.p = cfg.p_grid[ip];
        sim.T = cfg.T;
        sim.burn_in = cfg.burn_in;
        sim.seed = replication_seed(cfg.base_seed, static_cast<std::uint64_t>(rep));
        const SummaryStats stats = summarize(simulate(sim));
        for (std::size_t im = 0; im < n_m; ++im) {
          const EstimationReport rep_out = estimate(stats, cfg.methods[im], cfg.tol);
          ReplicationRow& row = table.rows[(ip * n_m + im) * R + (rep - 1)];
          row.p_true = sim.p;
          row.method = cfg.methods[im];
          row.rep = rep;
          row.seed = sim.seed;
          row.p_hat = rep_out.p_hat;
          row.statistic = rep_out.statistic;
          row.clamped = rep_out.clamped;
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mutex);
        if (k < first_error_task) {
          first_error_task = k;
          first_error = std::make_exception_ptr(ReplicationError(
              "replication failed at p=" + std::to_string(cfg.p_grid[ip]) +
              ", rep=" + std::to_string(rep) + ": " + e.what()));
        }
      }
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return table;
}

EstimatorSpread estimator_spread(const ReplicationTable& table, double p, Method method) {
  EstimatorSpread out;
  std::vector<double> xs;
  for (const auto* row : table.select(p, method)) {
    if (row->clamped != Clamp::none) {
      ++out.n_clamped;
      continue;
    }
    xs.push_back(row->p_hat);
  }
  out.n_used = static_cast<int>(xs.size());
  if (xs.size() < 2) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / double(xs.size() - 1));
  return out;
}

SigmaEstimate empirical_sigmas(const ReplicationTable& table, double p, double fd_step) {
  constexpr int kMinUsable = 30;
  SigmaEstimate s;
  s.mom = estimator_spread(table, p, Method::mom);
  s.ls = estimator_spread(table, p, Method::ls);
  if (s.mom.n_used < kMinUsable || s.ls.n_used < kMinUsable)
    throw InsufficientSampleError("need >= 30 unclamped replications per estimator at p=" +
                                  std::to_string(p) + " (mom " + std::to_string(s.mom.n_used) +
                                  ", ls " + std::to_string(s.ls.n_used) + ")");
  const double root_t = std::sqrt(double(table.T));
  const double dc = derivative(Quantity::c, table.dims, p, fd_step);
  const double di = ls_slope_deriv(table.dims.n, p);
  s.sigma_c = std::abs(dc) * root_t * s.mom.sd;
  s.sigma_I = std::abs(di) * root_t * s.ls.sd;
  return s;
}

QQResult qq_data(std::vector<double> samples) {
  constexpr std::size_t kMinSamples = 50;
  if (samples.size() < kMinSamples)
    throw InsufficientSampleError("QQ data needs >= 50 samples, got " +
                                  std::to_string(samples.size()));
  const double R = double(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / R;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (R - 1.0));
  if (!(sd > 0.0)) throw InsufficientSampleError("QQ samples have zero spread");

  std::sort(samples.begin(), samples.end());
  const boost::math::normal_distribution<double> z;
  QQResult out;
  out.points.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double theo = boost::math::quantile(z, (double(k) + 0.5) / R);
    out.points.emplace_back(theo, (samples[k] - mean) / sd);
  }

  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : out.points) {
    mx += x;
    my += y;
  }
  mx /= R;
  my /= R;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : out.points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  out.correlation = sxy / std::sqrt(sxx * syy);
  return out;
}

std::vector<SensitivityPoint> sensitivity_curves(const ReplicationTable& table,
                                                 const std::vector<double>& p_grid,
                                                 double fd_step) {
  std::vector<SensitivityPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    const SigmaEstimate s = empirical_sigmas(table, p, fd_step);
    SensitivityPoint pt;
    pt.p = p;
    pt.lambda = derivative(Quantity::c, table.dims, p, fd_step) / ls_slope_deriv(table.dims.n, p);
    pt.mu = s.sigma_I / s.sigma_c;
    pt.nu = pt.lambda * pt.mu;
    pt.sd_mom = s.mom.sd;
    pt.sd_ls = s.ls.sd;
    pt.n_clamped_mom = s.mom.n_clamped;
    pt.n_clamped_ls = s.ls.n_clamped;
    out.push_back(pt);
  }
  return out;
}

std::vector<SensitivityPoint> sensitivity_curves(StudyConfig cfg) {
  if (cfg.R < 100) throw DomainError("sensitivity curves need R >= 100");
  cfg.methods = {Method::mom, Method::ls};
  const ReplicationTable table = run_replications(cfg);
  return sensitivity_curves(table, cfg.p_grid, cfg.fd_step);
}

}  // namespace erwalk
