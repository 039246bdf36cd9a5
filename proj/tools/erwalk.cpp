// erwalk: simulate, estimate and study the edge probability of a resampled
// Erdos-Renyi graph observed through walker occupancy counts.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "erwalk/estimators.hpp"
#include "erwalk/io.hpp"
#include "erwalk/moments.hpp"
#include "erwalk/oracle.hpp"
#include "erwalk/simulator.hpp"
#include "erwalk/study.hpp"

namespace {

using namespace erwalk;

struct Options {
  int n = 7;
  int m = 14;
  double p = 0.5;
  int T = 4000;
  int burn_in = 1000;
  int R = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> methods;
  std::string out;
  std::string preset;
  double tol = kDefaultTol;
  double fd_step = 1e-5;
  std::vector<double> p_grid;
  unsigned threads = 0;
  std::string init = "uniform";
  std::vector<int> positions;
  std::string input = "-";
  std::string table;
};

// Fills every option the user did not set from the named preset.
void apply_preset(CLI::App& app, Options& o, const std::string& subcommand) {
  if (o.preset.empty()) return;
  if (o.preset != "paper-s6") throw CLI::ValidationError("--preset", "unknown preset " + o.preset);
  const StudyConfig s6 = paper_s6_preset();
  auto unset = [&](const char* name) { return app.get_option(name)->count() == 0; };
  if (unset("--n")) o.n = s6.dims.n;
  if (unset("--m")) o.m = s6.dims.m;
  if (unset("--t")) o.T = s6.T;
  if (unset("--burn-in")) o.burn_in = s6.burn_in;
  if (unset("--r")) o.R = s6.R;
  if (unset("--p-grid"))
    o.p_grid = subcommand == "curves" ? curve_grid() : s6.p_grid;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Method single_method(const Options& o, Method fallback) {
  if (o.methods.empty()) return fallback;
  if (o.methods.size() > 1) throw CLI::ValidationError("--method", "expects a single method here");
  return parse_method(o.methods.front());
}

StudyConfig study_config(const Options& o, std::vector<double> default_grid) {
  StudyConfig cfg;
  cfg.dims = {o.n, o.m};
  cfg.T = o.T;
  cfg.burn_in = o.burn_in;
  cfg.R = o.R;
  cfg.p_grid = o.p_grid.empty() ? std::move(default_grid) : o.p_grid;
  cfg.base_seed = o.seed;
  cfg.fd_step = o.fd_step;
  cfg.tol = o.tol;
  cfg.threads = o.threads;
  if (!o.methods.empty()) {
    cfg.methods.clear();
    for (const auto& name : o.methods) cfg.methods.push_back(parse_method(name));
  }
  return cfg;
}

int run_simulate(const Options& o) {
  SimConfig cfg;
  cfg.dims = {o.n, o.m};
  cfg.p = o.p;
  cfg.T = o.T;
  cfg.burn_in = o.burn_in;
  cfg.seed = o.seed;
  if (!o.positions.empty()) {
    cfg.init = InitMode::explicit_positions;
    for (int x : o.positions) cfg.positions.push_back(x - 1);
  } else if (o.init == "first") {
    cfg.init = InitMode::all_at_first;
  }
  Output out(o.out);
  io::write_series_csv(out.stream(), simulate(cfg));
  return 0;
}

int run_estimate(const Options& o) {
  ObservationSeries series;
  if (o.input == "-") {
    series = io::read_series_csv(std::cin, o.m);
  } else {
    std::ifstream in(o.input);
    if (!in) throw std::runtime_error("cannot open " + o.input);
    series = io::read_series_csv(in, o.m);
  }
  if (series.dims.n != o.n)
    throw DomainError("series has " + std::to_string(series.dims.n) + " vertices but --n is " +
                      std::to_string(o.n));
  const EstimationReport report = estimate(summarize(series), single_method(o, Method::mom), o.tol);
  Output out(o.out);
  out.stream() << io::to_json(report).dump() << '\n';
  return 0;
}

int run_moments(const Options& o) {
  Output out(o.out);
  out.stream() << io::to_json(moment_profile(ModelDims{o.n, o.m}, o.p)).dump(2) << '\n';
  return 0;
}

int run_oracle(const Options& o) {
  Output out(o.out);
  out.stream() << io::to_json(io::oracle_summary(o.n, o.m, o.p)).dump(2) << '\n';
  return 0;
}

int run_replicate(const Options& o) {
  const StudyConfig cfg = study_config(o, {o.p});
  Output out(o.out);
  io::write_replication_csv(out.stream(), run_replications(cfg));
  return 0;
}

int run_qq(const Options& o) {
  const Method method = single_method(o, Method::mom);
  ReplicationTable table;
  if (!o.table.empty()) {
    std::ifstream in(o.table);
    if (!in) throw std::runtime_error("cannot open " + o.table);
    table = io::read_replication_csv(in, {o.n, o.m}, o.T);
  } else {
    StudyConfig cfg = study_config(o, {o.p});
    cfg.p_grid = {o.p};
    cfg.methods = {method};
    table = run_replications(cfg);
  }
  std::vector<double> samples;
  int clamped = 0;
  for (const auto* row : table.select(o.p, method)) {
    if (row->clamped != Clamp::none)
      ++clamped;
    else
      samples.push_back(row->p_hat);
  }
  const QQResult qq = qq_data(samples);
  Output out(o.out);
  io::write_qq_csv(out.stream(), qq);
  std::cerr << "qq correlation=" << io::format_double(qq.correlation)
            << " samples=" << samples.size() << " clamped_excluded=" << clamped << '\n';
  return 0;
}

int run_curves(const Options& o) {
  const StudyConfig cfg = study_config(o, curve_grid());
  Output out(o.out);
  io::write_curves_csv(out.stream(), sensitivity_curves(cfg));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-probability inference for a resampled Erdos-Renyi graph from walker counts"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file mirroring the flags; flags override it");

  Options o;
  app.add_option("--n", o.n, "Number of vertices")->check(CLI::Range(2, 1 << 20));
  app.add_option("--m", o.m, "Number of walkers")->check(CLI::Range(1, 1 << 30));
  app.add_option("--p", o.p, "Edge probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--t", o.T, "Recorded steps")->check(CLI::Range(2, 1 << 30));
  app.add_option("--burn-in", o.burn_in, "Unrecorded steps before observation")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--r", o.R, "Replications per grid point")->check(CLI::Range(2, 1 << 30));
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--method", o.methods, "mom, mom-known-mean or ls (repeatable for replicate)")
      ->allow_extra_args(false)
      ->check(CLI::IsMember({"mom", "mom-known-mean", "ls"}));
  app.add_option("--out", o.out, "Output path (default stdout)");
  app.add_option("--preset", o.preset, "Named study preset")->check(CLI::IsMember({"paper-s6"}));
  app.add_option("--tol", o.tol, "Inversion tolerance")->check(CLI::PositiveNumber);
  app.add_option("--fd-step", o.fd_step, "Finite-difference step for c'(p)")
      ->check(CLI::PositiveNumber);
  app.add_option("--p-grid", o.p_grid, "Comma-separated true p values")
      ->delimiter(',')
      ->allow_extra_args(false);
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Write a simulated occupancy series as CSV");
  simulate_cmd->add_option("--init", o.init, "Initial placement: uniform or first")
      ->check(CLI::IsMember({"uniform", "first"}));
  simulate_cmd->add_option("--positions", o.positions, "Explicit 1-based walker positions")
      ->delimiter(',')
      ->allow_extra_args(false);

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate p from a series CSV");
  estimate_cmd->add_option("input", o.input, "Series CSV (default stdin)");

  app.add_subcommand("moments", "Print every closed-form moment at (n, M, p) as JSON");
  app.add_subcommand("oracle", "Print exact small-instance quantities (n <= 4) as JSON");
  app.add_subcommand("replicate", "Run a replication study and write the table CSV");
  auto* qq_cmd = app.add_subcommand("qq", "Normal QQ data for one estimator at one p");
  qq_cmd->add_option("--table", o.table, "Read replications from this CSV instead of simulating");
  app.add_subcommand("curves", "lambda/mu/nu comparison curves over a p grid");

  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    apply_preset(app, o, cmd);
    if (cmd == "simulate") return run_simulate(o);
    if (cmd == "estimate") return run_estimate(o);
    if (cmd == "moments") return run_moments(o);
    if (cmd == "oracle") return run_oracle(o);
    if (cmd == "replicate") return run_replicate(o);
    if (cmd == "qq") return run_qq(o);
    if (cmd == "curves") return run_curves(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "erwalk " << cmd << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}
