#include "erwalk/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace erwalk::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool next_data_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("trailing characters in number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("trailing characters in integer: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not an unsigned integer: '" + s + "'");
  }
  if (used != s.size() || (!s.empty() && s[0] == '-'))
    throw ParseError("bad unsigned integer: '" + s + "'");
  return v;
}

Clamp parse_clamp(const std::string& s) {
  if (s == "none") return Clamp::none;
  if (s == "low") return Clamp::low;
  if (s == "high") return Clamp::high;
  throw ParseError("unknown clamp flag '" + s + "'");
}

void expect_header(const std::string& got, const std::string& want) {
  if (got != want) throw ParseError("expected header '" + want + "', got '" + got + "'");
}

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_series_csv(std::ostream& os, const ObservationSeries& series) {
  os << 't';
  for (int i = 1; i <= series.dims.n; ++i) os << ",v" << i;
  os << '\n';
  for (int t = 0; t < series.T(); ++t) {
    os << (t + 1);
    for (int i = 0; i < series.dims.n; ++i) os << ',' << series.counts(t, i);
    os << '\n';
  }
}

ObservationSeries read_series_csv(std::istream& is, int expected_m) {
  std::string line;
  if (!next_data_line(is, line)) throw ParseError("empty series file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "t")
    throw ParseError("series header must be t,v1,...,vn with n >= 2");
  const int n = static_cast<int>(header.size()) - 1;
  for (int i = 1; i <= n; ++i)
    if (header[i] != "v" + std::to_string(i))
      throw ParseError("series header column " + std::to_string(i + 1) + " must be v" +
                       std::to_string(i));

  std::vector<int> cells;
  int T = 0;
  while (next_data_line(is, line)) {
    const auto row = split_csv_line(line);
    if (static_cast<int>(row.size()) != n + 1)
      throw ParseError("series row " + std::to_string(T + 1) + " has " +
                       std::to_string(row.size()) + " cells, expected " + std::to_string(n + 1));
    if (parse_int(row[0]) != T + 1)
      throw ParseError("series rows must be numbered consecutively from 1");
    for (int i = 1; i <= n; ++i) cells.push_back(static_cast<int>(parse_int(row[i])));
    ++T;
  }
  if (T == 0) throw ParseError("series has no rows");

  ObservationSeries s;
  s.counts = Eigen::Map<const CountMatrix>(cells.data(), T, n);
  s.dims.n = n;
  s.dims.m = expected_m > 0 ? expected_m : s.counts.row(0).sum();
  s.validate();
  return s;
}

void write_replication_csv(std::ostream& os, const ReplicationTable& table) {
  os << "p_true,method,rep,seed,p_hat,statistic,clamped\n";
  for (const auto& r : table.rows)
    os << format_double(r.p_true) << ',' << to_string(r.method) << ',' << r.rep << ','
       << r.seed << ',' << format_double(r.p_hat) << ',' << format_double(r.statistic) << ','
       << to_string(r.clamped) << '\n';
}

ReplicationTable read_replication_csv(std::istream& is, const ModelDims& dims, int T) {
  std::string line;
  if (!next_data_line(is, line)) throw ParseError("empty replication file");
  expect_header(line, "p_true,method,rep,seed,p_hat,statistic,clamped");
  ReplicationTable table;
  table.dims = dims;
  table.T = T;
  while (next_data_line(is, line)) {
    const auto c = split_csv_line(line);
    if (c.size() != 7) throw ParseError("replication row needs 7 cells: '" + line + "'");
    ReplicationRow r;
    r.p_true = parse_double(c[0]);
    try {
      r.method = parse_method(c[1]);
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
    r.rep = static_cast<int>(parse_int(c[2]));
    r.seed = parse_u64(c[3]);
    r.p_hat = parse_double(c[4]);
    r.statistic = parse_double(c[5]);
    r.clamped = parse_clamp(c[6]);
    table.rows.push_back(r);
  }
  return table;
}

void write_curves_csv(std::ostream& os, const std::vector<SensitivityPoint>& curve) {
  os << "p,lambda,mu,nu,sd_mom,sd_ls,n_clamped_mom,n_clamped_ls\n";
  for (const auto& pt : curve)
    os << format_double(pt.p) << ',' << format_double(pt.lambda) << ',' << format_double(pt.mu)
       << ',' << format_double(pt.nu) << ',' << format_double(pt.sd_mom) << ','
       << format_double(pt.sd_ls) << ',' << pt.n_clamped_mom << ',' << pt.n_clamped_ls << '\n';
}

std::vector<SensitivityPoint> read_curves_csv(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line)) throw ParseError("empty curves file");
  expect_header(line, "p,lambda,mu,nu,sd_mom,sd_ls,n_clamped_mom,n_clamped_ls");
  std::vector<SensitivityPoint> out;
  while (next_data_line(is, line)) {
    const auto c = split_csv_line(line);
    if (c.size() != 8) throw ParseError("curves row needs 8 cells: '" + line + "'");
    SensitivityPoint pt;
    pt.p = parse_double(c[0]);
    pt.lambda = parse_double(c[1]);
    pt.mu = parse_double(c[2]);
    pt.nu = parse_double(c[3]);
    pt.sd_mom = parse_double(c[4]);
    pt.sd_ls = parse_double(c[5]);
    pt.n_clamped_mom = static_cast<int>(parse_int(c[6]));
    pt.n_clamped_ls = static_cast<int>(parse_int(c[7]));
    out.push_back(pt);
  }
  return out;
}

void write_qq_csv(std::ostream& os, const QQResult& qq) {
  os << "theoretical_q,empirical_q\n";
  for (const auto& [x, y] : qq.points) os << format_double(x) << ',' << format_double(y) << '\n';
}

nlohmann::ordered_json to_json(const EstimationReport& report) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(report.method));
  j["p_hat"] = report.p_hat;
  j["statistic"] = report.statistic;
  j["clamped"] = std::string(to_string(report.clamped));
  j["bracket_lo"] = report.bracket_lo;
  j["bracket_hi"] = report.bracket_hi;
  j["tol"] = report.tol;
  if (report.burn_in) j["burn_in"] = *report.burn_in;
  return j;
}

nlohmann::ordered_json to_json(const MomentProfile<double>& mp) {
  nlohmann::ordered_json j;
  j["n"] = mp.dims.n;
  j["M"] = mp.dims.m;
  j["p"] = mp.p;
  j["F"] = mp.F;
  j["G"] = mp.G;
  j["pi1"] = mp.scenarios.pi1;
  j["pi2"] = mp.scenarios.pi2;
  j["pi3"] = mp.scenarios.pi3;
  j["pi4"] = mp.scenarios.pi4;
  j["kappa"] = opt(mp.kappa);
  j["pi_eq"] = opt(mp.pi_eq);
  j["pi_neq"] = opt(mp.pi_neq);
  j["m2"] = opt(mp.m2);
  j["c"] = opt(mp.c);
  j["I"] = mp.I;
  j["J"] = mp.J;
  return j;
}

OracleSummary oracle_summary(int n, int m, double p) {
  OracleSummary s;
  s.scenarios = oracle::exact_scenarios(n, p);
  const oracle::PairChain chain = oracle::build_pair_chain(n, p);
  s.pi_eq = chain.pi_eq();
  s.pi_neq = chain.pi_neq();
  s.kappa_implied = s.pi_eq / s.pi_neq;
  s.c_exact = oracle::exact_lag1_cov(n, m, p);
  return s;
}

nlohmann::ordered_json to_json(const OracleSummary& s) {
  nlohmann::ordered_json j;
  j["pi1"] = s.scenarios.pi1;
  j["pi2"] = s.scenarios.pi2;
  j["pi3"] = s.scenarios.pi3;
  j["pi4"] = s.scenarios.pi4;
  j["kappa_implied"] = s.kappa_implied;
  j["pi_eq"] = s.pi_eq;
  j["pi_neq"] = s.pi_neq;
  j["c_exact"] = s.c_exact;
  return j;
}

}  // namespace erwalk::io
