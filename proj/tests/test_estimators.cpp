#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "erwalk/estimators.hpp"
#include "erwalk/moments.hpp"

using namespace erwalk;
using doctest::Approx;

namespace {

ObservationSeries from_rows(int n, int m, const std::vector<std::vector<int>>& rows) {
  ObservationSeries s;
  s.dims = {n, m};
  s.counts.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (int i = 0; i < n; ++i) s.counts(static_cast<Eigen::Index>(t), i) = rows[t][i];
  return s;
}

ObservationSeries simulated(int n, int m, double p, int T, std::uint64_t seed) {
  SimConfig cfg;
  cfg.dims = {n, m};
  cfg.p = p;
  cfg.T = T;
  cfg.seed = seed;
  return simulate(cfg);
}

}  // namespace

TEST_CASE("summary of a constant uniform series") {
  const auto s = summarize(from_rows(3, 6, {{2, 2, 2}, {2, 2, 2}, {2, 2, 2}, {2, 2, 2}}));
  CHECK(s.c_hat == 0.0);
  CHECK(s.c_hat_known_mean == 0.0);
  CHECK(s.mean_counts.sum() == 6.0);
}

TEST_CASE("alternating rows have zero lag-1 products") {
  const int n = 3, m = 4;
  std::vector<std::vector<int>> rows;
  for (int t = 0; t < 10; ++t) rows.push_back(t % 2 == 0 ? std::vector{m, 0, 0} : std::vector{0, m, 0});
  const auto s = summarize(from_rows(n, m, rows));
  CHECK((s.lag1_products.array() == 0.0).all());
  CHECK(s.c_hat_known_mean == Approx(-double(m) * m / (n * n)));
  // Means: vertex 1 and 2 hold M half the time.
  CHECK(s.c_hat == Approx(-(2.0 * 4.0) / 3.0));
}

TEST_CASE("index convention: products and squares over t < T, means over all T") {
  const auto s = summarize(from_rows(2, 3, {{3, 0}, {1, 2}, {2, 1}}));
  CHECK(s.T == 3);
  CHECK(s.mean_counts[0] == Approx(2.0));
  CHECK(s.mean_counts[1] == Approx(1.0));
  CHECK(s.lag1_products[0] == Approx((3 * 1 + 1 * 2) / 2.0));
  CHECK(s.lag1_products[1] == Approx((0 * 2 + 2 * 1) / 2.0));
  CHECK(s.squares[0] == Approx((9 + 1) / 2.0));
  CHECK(s.squares[1] == Approx((0 + 4) / 2.0));
  CHECK(s.lag1_total == 7);
  CHECK(s.square_total == 14);
}

TEST_CASE("summary rejects short or inconsistent series") {
  CHECK_THROWS_AS(summarize(from_rows(2, 2, {{1, 1}})), DomainError);
  CHECK_THROWS_AS(summarize(from_rows(2, 2, {{1, 1}, {2, 1}})), DomainError);
  CHECK_THROWS_AS(summarize(from_rows(2, 2, {{3, -1}, {1, 1}})), DomainError);
}

TEST_CASE("summary invariants on simulated series") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = summarize(simulated(5, 9, 0.3, 300, seed));
    CHECK(s.mean_counts.sum() == Approx(9.0).epsilon(1e-14));
    // Jensen over the first T-1 rows.
    const auto series = simulated(5, 9, 0.3, 300, seed);
    for (int i = 0; i < 5; ++i) {
      const double head_mean = series.counts.col(i).head(299).cast<double>().mean();
      CHECK(s.squares[i] >= head_mean * head_mean - 1e-12);
    }
  }
}

TEST_CASE("method-of-moments round trip") {
  const ModelDims d{7, 14};
  for (double p : {0.1, 0.25, 0.3, 0.5, 0.75, 0.9}) {
    const auto r = estimate_mom_from_statistic(d, lag1_cov(d, p));
    CHECK(std::abs(r.p_hat - p) < 1e-9);
    CHECK(r.clamped == Clamp::none);
    CHECK(r.bracket_lo == 1e-6);
    CHECK(r.bracket_hi == 1.0);
  }
  const auto high = estimate_mom_from_statistic(d, -0.5);
  CHECK(high.p_hat == 1.0);
  CHECK(high.clamped == Clamp::high);
  const auto low = estimate_mom_from_statistic(d, 100.0);
  CHECK(low.p_hat == 1e-6);
  CHECK(low.clamped == Clamp::low);
}

TEST_CASE("least-squares round trip and endpoints") {
  for (int n : {2, 3, 7}) {
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const auto r = estimate_ls_from_ratio(n, ls_slope(n, p));
      CHECK(std::abs(r.p_hat - p) < 1e-9);
      CHECK(r.clamped == Clamp::none);
    }
  }
  CHECK(estimate_ls_from_ratio(7, 1.0).p_hat == 0.0);
  CHECK(estimate_ls_from_ratio(7, 1.0).clamped == Clamp::none);
  CHECK(estimate_ls_from_ratio(7, 0.0).p_hat == 1.0);
  CHECK(estimate_ls_from_ratio(7, 1.3).clamped == Clamp::low);
  CHECK(estimate_ls_from_ratio(7, 1.3).p_hat == 0.0);
  CHECK(estimate_ls_from_ratio(7, -0.2).clamped == Clamp::high);
  CHECK(estimate_ls_from_ratio(7, -0.2).p_hat == 1.0);
  CHECK(estimate_ls_from_ratio(7, -0.2).statistic == -0.2);
}

TEST_CASE("least squares on a series where nobody moves") {
  const auto s = summarize(from_rows(3, 5, {{5, 0, 0}, {5, 0, 0}, {5, 0, 0}, {5, 0, 0}}));
  CHECK(ls_ratio(s) == 1.0);
  const auto r = estimate_ls(s);
  CHECK(r.p_hat == 0.0);
  CHECK(r.clamped == Clamp::none);
}

TEST_CASE("least squares refuses uniform constant counts") {
  const auto s = summarize(from_rows(3, 6, {{2, 2, 2}, {2, 2, 2}, {2, 2, 2}}));
  CHECK_THROWS_AS(estimate_ls(s), DegenerateInputError);
}

TEST_CASE("LS ratio stays finite and clamping is recorded") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + int(rng() % 5), m = 1 + int(rng() % 8), T = 2 + int(rng() % 6);
    std::vector<std::vector<int>> rows;
    for (int t = 0; t < T; ++t) {
      std::vector<int> row(n, 0);
      for (int w = 0; w < m; ++w) ++row[rng() % n];
      rows.push_back(row);
    }
    const auto s = summarize(from_rows(n, m, rows));
    EstimationReport r;
    try {
      r = estimate_ls(s);
    } catch (const DegenerateInputError&) {
      continue;
    }
    CHECK(std::isfinite(r.statistic));
    CHECK(r.p_hat >= 0.0);
    CHECK(r.p_hat <= 1.0);
    CHECK((r.clamped != Clamp::none) == (r.statistic < 0.0 || r.statistic > 1.0));
  }
}

TEST_CASE("burn-in from the simulator is carried into the report") {
  const auto s = summarize(simulated(4, 6, 0.4, 200, 2));
  CHECK(estimate(s, Method::mom).burn_in == 1000);
  CHECK(estimate(s, Method::ls).burn_in == 1000);
  CHECK(estimate(s, Method::mom_known_mean).method == Method::mom_known_mean);
}

TEST_CASE("method names") {
  for (Method m : {Method::mom, Method::mom_known_mean, Method::ls})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("mle"), DomainError);
}

TEST_CASE("empirical covariance tracks c(p) on a simulated series") {
  // 20 independent runs give the Monte Carlo SE of c_hat.
  const ModelDims d{7, 14};
  const double p = 0.5;
  std::vector<double> vals;
  for (std::uint64_t seed = 100; seed < 120; ++seed)
    vals.push_back(summarize(simulated(d.n, d.m, p, 4000, seed)).c_hat);
  double mu = 0.0;
  for (double v : vals) mu += v;
  mu /= vals.size();
  double ss = 0.0;
  for (double v : vals) ss += (v - mu) * (v - mu);
  const double sd = std::sqrt(ss / (vals.size() - 1));
  // A single run lies within 4 SE; the average within 4 SE / sqrt(20).
  CHECK(std::abs(vals.front() - lag1_cov(d, p)) < 4 * sd);
  CHECK(std::abs(mu - lag1_cov(d, p)) < 4 * sd / std::sqrt(double(vals.size())));
}

TEST_CASE("both estimators agree on a long stationary run") {
  const auto s = summarize(simulated(7, 14, 0.5, 100000, 77));
  const double mom = estimate(s, Method::mom).p_hat;
  const double ls = estimate(s, Method::ls).p_hat;
  CHECK(std::abs(mom - ls) <= 0.02);
  CHECK(std::abs(mom - 0.5) < 0.03);
}

TEST_CASE("least squares does not need a stationary start") {
  // Everyone starts at one vertex with no burn-in.
  SimConfig cfg;
  cfg.dims = {7, 14};
  cfg.p = 0.3;
  cfg.T = 20000;
  cfg.burn_in = 0;
  cfg.init = InitMode::all_at_first;
  cfg.seed = 5;
  const auto r = estimate(summarize(simulate(cfg)), Method::ls);
  CHECK(std::abs(r.p_hat - 0.3) < 0.03);
}
