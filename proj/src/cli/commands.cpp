#include "tsbandit/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "tsbandit/bounds.hpp"
#include "tsbandit/cli/config.hpp"
#include "tsbandit/cli/csv.hpp"
#include "tsbandit/cli/svg_plot.hpp"
#include "tsbandit/errors.hpp"
#include "tsbandit/numerics.hpp"

namespace tsb::cli {

namespace {

std::string two_decimals(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string sci(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3e", v);
  return buffer;
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
  file << text;
}

// Builds the policy once against a sampled instance so constant/instance
// mismatches surface as configuration errors before any episode runs.
void preflight(const Experiment& experiment) {
  const auto& config = experiment.config;
  RngStream rng(config.master_seed, 0);
  const BanditInstance instance =
      std::holds_alternative<BanditInstance>(config.environment)
          ? std::get<BanditInstance>(config.environment)
          : sample_instance(std::get<PriorSpec>(config.environment), rng);
  make_policy(config.policy, instance, config.horizon);
}

std::string simulate_csv(const std::vector<Experiment>& experiments, unsigned workers) {
  for (const auto& e : experiments) preflight(e);
  std::ostringstream csv;
  write_csv_header(csv);
  for (const auto& e : experiments) {
    write_csv_rows(csv, make_records(e, estimate_regret(e.config, workers)));
  }
  return csv.str();
}

struct SimulateOptions {
  std::string config_path;
  std::string out_path;
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;
  std::vector<double> deltas;
};

Experiment load_experiment(const SimulateOptions& o, ConfigEntries entries) {
  Experiment e = build_experiment(entries);
  if (o.seed) e.config.master_seed = *o.seed;
  return e;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const auto experiment = load_experiment(o, read_config_file(o.config_path));
  write_output(simulate_csv({experiment}, o.workers), o.out_path, out);
  return kExitOk;
}

int cmd_sweep(const SimulateOptions& o, std::ostream& out) {
  const auto base = read_config_file(o.config_path);
  std::vector<Experiment> experiments;
  for (double delta : o.deltas) {
    auto entries = base;
    const int line = entries.contains("delta") ? entries.at("delta").line : 0;
    entries["delta"] = ConfigEntry{format_double(delta), line};
    Experiment e = load_experiment(o, entries);
    e.id += "_delta=" + format_double(delta);
    experiments.push_back(std::move(e));
  }
  write_output(simulate_csv(experiments, o.workers), o.out_path, out);
  return kExitOk;
}

struct BoundsOptions {
  std::string theorem;
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::vector<double> gaps;
  std::int64_t m = 100;
  double x = 1.0;
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  std::string compare_path;
};

void print_report(const BoundReport& report, std::ostream& out) {
  out << "bound " << report.name << '(';
  for (std::size_t i = 0; i < report.inputs.size(); ++i) {
    if (i) out << ", ";
    out << report.inputs[i].first << '=' << format_double(report.inputs[i].second);
  }
  out << ") = " << two_decimals(report.bound_value) << '\n';
  if (report.empirical) {
    out << "empirical max mean_cum_regret = " << two_decimals(*report.empirical) << '\n'
        << "verdict: " << (*report.holds ? "HOLDS (empirical <= bound)" : "VIOLATED (empirical > bound)")
        << '\n';
  }
}

void print_verification(const VerificationReport& report, std::ostream& out) {
  out << report.name << '\n';
  for (const auto& c : report.checks) {
    out << "  " << (c.passed ? "PASS" : "FAIL") << "  residual=" << sci(c.residual)
        << "  tol=" << sci(c.tolerance) << "  " << c.identity << '\n';
  }
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("missing required option ") + flag);
  return *v;
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out) {
  const auto& th = o.theorem;
  if (th == "verify-proofs") {
    const auto step2 = verify_step2_integrals(o.n, o.k, false);
    const auto step3 = verify_step3_terms(o.n, o.k, false);
    print_verification(step2, out);
    print_verification(step3, out);
    bool ok = step2.passed() && step3.passed();
    if (o.delta && o.epsilon) {
      const auto a = verify_aith_threshold(*o.delta, *o.epsilon);
      out << "aith(delta=" << format_double(*o.delta) << ", epsilon=" << format_double(*o.epsilon)
          << ") = " << a << '\n';
    }
    out << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kExitOk : kExitRuntime;
  }
  if (th == "hoeffding") {
    RngStream rng(o.seed, 0);
    const auto r = hoeffding_maximal_check(o.m, o.x, o.trials, rng);
    out << "hoeffding(m=" << r.horizon << ", x=" << format_double(r.threshold)
        << ", trials=" << r.trials << "): frequency=" << sci(r.frequency)
        << " bound=" << sci(r.bound) << " se=" << sci(r.binomial_se) << ' '
        << (r.passed ? "PASS" : "FAIL") << '\n';
    return r.passed ? kExitOk : kExitRuntime;
  }
  if (th == "tail") {
    const auto b = gauss_tail_bounds(o.x);
    out << "gauss_tail(x=" << format_double(o.x) << "): lower=" << sci(b.lower)
        << " upper=" << sci(b.upper) << '\n';
    return kExitOk;
  }
  if (th == "aith") {
    const auto a = verify_aith_threshold(require(o.delta, "--delta"), require(o.epsilon, "--epsilon"));
    out << "aith(delta=" << format_double(*o.delta) << ", epsilon=" << format_double(*o.epsilon)
        << ") = " << a << '\n';
    return kExitOk;
  }

  BoundReport report;
  report.name = th;
  if (th == "thm1" || th == "lower") {
    report.inputs = {{"n", static_cast<double>(o.n)}, {"K", static_cast<double>(o.k)}};
    report.bound_value = th == "thm1" ? thm1_bound(o.n, o.k) : minimax_lower_bound(o.n, o.k);
  } else if (th == "thm2") {
    report.inputs = {{"delta", require(o.delta, "--delta")}};
    report.bound_value = thm2_bound(*o.delta);
  } else if (th == "thm3") {
    if (o.gaps.empty()) throw ConfigError("missing required option --gaps");
    report.inputs = {{"epsilon", require(o.epsilon, "--epsilon")}};
    report.bound_value = thm3_bound(o.gaps, *o.epsilon);
  } else {
    throw ConfigError("unknown theorem '" + th +
                      "' (expected thm1, thm2, thm3, lower, aith, tail, hoeffding, verify-proofs)");
  }
  if (!o.compare_path.empty()) {
    const auto records = read_csv_file(o.compare_path);
    if (records.empty()) throw ConfigError("no data rows in '" + o.compare_path + "'");
    double worst = 0.0;
    for (const auto& r : records) worst = std::max(worst, r.mean_cum_regret);
    report.compare(worst);
  }
  print_report(report, out);
  return kExitOk;
}

int cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_path,
             const std::string& title, std::ostream& out) {
  std::vector<OutputRecord> records;
  for (const auto& path : csv_paths) {
    auto part = read_csv_file(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  if (records.empty()) throw ConfigError("no data rows");
  write_output(render_regret_svg(records, title), out_path, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bandit regret simulator for Thompson Sampling and known-mean policies"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run one experiment config, emit CSV");
  simulate->add_option("config", sim.config_path, "Experiment config file")->required();
  SimulateOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run a config once per delta value, emit CSV");
  sweep->add_option("config", sweep_opts.config_path, "Experiment config file")->required();
  sweep->add_option("--deltas", sweep_opts.deltas, "Gap values")->delimiter(',')->required();
  for (auto [cmd, opts] : {std::pair{simulate, &sim}, std::pair{sweep, &sweep_opts}}) {
    cmd->add_option("--out", opts->out_path, "Write CSV here instead of stdout");
    cmd->add_option("--workers", opts->workers, "Worker threads (0 = all cores)");
    cmd->add_option("--seed", opts->seed, "Override the config's master seed");
  }

  BoundsOptions bo;
  std::optional<double> x_flag;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a regret bound or run a proof check");
  bounds->add_option("theorem", bo.theorem,
                     "thm1 | thm2 | thm3 | lower | aith | tail | hoeffding | verify-proofs")
      ->required();
  bounds->add_option("--n", bo.n, "Horizon");
  bounds->add_option("--K", bo.k, "Number of arms");
  bounds->add_option("--delta", bo.delta, "Gap");
  bounds->add_option("--epsilon", bo.epsilon, "Minimum gap");
  bounds->add_option("--gaps", bo.gaps, "Gap vector")->delimiter(',');
  bounds->add_option("--m", bo.m, "Hoeffding horizon");
  bounds->add_option("--x", x_flag, "Threshold (hoeffding, tail)");
  bounds->add_option("--trials", bo.trials, "Monte Carlo trials");
  bounds->add_option("--seed", bo.seed, "Monte Carlo seed");
  bounds->add_option("--compare", bo.compare_path, "CSV with empirical regret to compare");

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  std::string plot_title = "Mean cumulative regret";
  auto* plot = app.add_subcommand("plot", "Render regret CSVs as an SVG line chart");
  plot->add_option("csv", plot_inputs, "CSV files")->required();
  plot->add_option("--out", plot_out, "SVG output path")->required();
  plot->add_option("--title", plot_title, "Chart title");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  if (x_flag) bo.x = *x_flag;

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, out);
    if (bounds->parsed()) return cmd_bounds(bo, out);
    if (plot->parsed()) return cmd_plot(plot_inputs, plot_out, plot_title, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace tsb::cli
