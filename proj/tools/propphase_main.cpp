// propphase: estimate the proportion of false null hypotheses from test
// statistics via integral-equation kernels, run the simulation harness,
// and dump kernel/psi curves for plotting.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "propphase/baselines.hpp"
#include "propphase/errors.hpp"
#include "propphase/estimator.hpp"
#include "propphase/families.hpp"
#include "propphase/kernels.hpp"
#include "propphase/sim.hpp"
#include "propphase/version.hpp"

namespace {

using nlohmann::json;
using namespace propphase;

constexpr int kExitOk = 0;
constexpr int kExitArgs = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

json make_manifest(const std::string& command, json config) {
  return json{{"command", command},
              {"config", std::move(config)},
              {"library_version", kVersion},
              {"timestamp", iso_timestamp()}};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << contents;
}

// Single-column CSV of z values; an optional header row is auto-detected.
std::vector<double> read_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SupportError("cannot open input file '" + path + "'", 0);
  }
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && line[start] == ' ') ++start;
    if (start == line.size()) continue;
    const std::string tok = line.substr(start);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      values.push_back(v);
    } catch (const std::exception&) {
      if (lineno == 1 && values.empty()) continue;  // header row
      throw SupportError("non-numeric value '" + tok + "' at line " +
                             std::to_string(lineno) + " of " + path,
                         lineno);
    }
  }
  if (values.empty()) {
    throw SupportError("input file '" + path + "' contains no values", 0);
  }
  return values;
}

struct EstimateOptions {
  std::string family;
  std::string input;
  std::optional<double> t;
  std::optional<double> gamma;
  std::optional<double> eta_sup;
  std::optional<double> u3;
  int grid_n = 400;
  int series_n = 20;
  std::string output = "json";
  std::string out_path;
};

int cmd_estimate(const EstimateOptions& opt) {
  const FamilySpec fam = FamilySpec::parse(opt.family);
  if (construction_for(fam) == Construction::None) {
    throw NoConstructionError(
        std::string("estimate: no estimator kernel exists for the ") +
        fam.kind_name() + " family (construction nonexistence)");
  }
  if (opt.t.has_value() == opt.gamma.has_value()) {
    throw ConfigError("estimate: give exactly one of --t or --gamma");
  }

  const std::vector<double> z = read_values_csv(opt.input);

  double t;
  if (opt.t) {
    t = *opt.t;
  } else {
    TuningRule rule;
    rule.gamma = *opt.gamma;
    rule.eta_sup = opt.eta_sup;
    rule.u3 = opt.u3;
    t = tuning_t(fam, z.size(), rule);
  }

  KernelConfig cfg;
  cfg.grid_n = opt.grid_n;
  cfg.series_n = opt.series_n;
  const PhaseEstimate est = empirical_phase(z, t, fam, cfg);

  json config{{"family", fam.to_string()}, {"input", opt.input},
              {"t", t},                    {"grid", cfg.grid_n},
              {"series_n", cfg.series_n},  {"output", opt.output}};
  if (opt.gamma) config["gamma"] = *opt.gamma;
  if (opt.eta_sup) config["eta_sup"] = *opt.eta_sup;
  if (opt.u3) config["u3"] = *opt.u3;
  const json manifest = make_manifest("estimate", config);

  std::string payload;
  if (opt.output == "json") {
    json doc{{"pi1_raw", est.pi1_raw},
             {"pi1_clipped", est.pi1_clipped},
             {"pi0_clipped", est.pi0_clipped},
             {"t", est.t_used},
             {"m", est.m},
             {"diagnostics",
              {{"kernel_overflow_count", est.diagnostics.kernel_overflow_count},
               {"series_tail_max", est.diagnostics.series_tail_max},
               {"series_tail_warning", est.diagnostics.series_tail_warning}}},
             {"manifest", manifest}};
    payload = doc.dump(2) + "\n";
  } else if (opt.output == "csv") {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%zu,%d,%.17g\n",
                  est.pi1_raw, est.pi1_clipped, est.pi0_clipped, est.t_used,
                  est.m, est.diagnostics.kernel_overflow_count,
                  est.diagnostics.series_tail_max);
    payload =
        "pi1_raw,pi1_clipped,pi0_clipped,t,m,kernel_overflow_count,series_tail_max\n";
    payload += buf;
  } else {
    throw ConfigError("estimate: --output must be json or csv");
  }

  if (opt.out_path.empty()) {
    std::cout << payload;
  } else {
    write_file(opt.out_path, payload);
    if (opt.output == "csv") {
      write_file(opt.out_path + ".manifest.json", manifest.dump(2) + "\n");
    }
  }
  return kExitOk;
}

struct SimulateOptions {
  std::string scenario_path;
  std::string family;
  std::size_t m = 0;
  std::string regime;
  int reps = 100;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_csv = "replications.csv";
  std::string out_json = "summary.json";
};

int cmd_simulate(const SimulateOptions& opt) {
  Scenario sc;
  if (!opt.scenario_path.empty()) {
    std::ifstream in(opt.scenario_path);
    if (!in) throw SupportError("cannot open scenario file '" + opt.scenario_path + "'", 0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    sc = scenario_from_json_text(buffer.str());
  } else {
    if (opt.family.empty() || opt.regime.empty() || opt.m == 0) {
      throw ConfigError("simulate: need --scenario or all of --family/--m/--regime");
    }
    sc.family = FamilySpec::parse(opt.family);
    sc.m = opt.m;
    sc.regime = parse_regime(opt.regime);
    sc.reps = opt.reps;
    sc.master_seed = opt.seed;
  }
  if (const char* env = std::getenv("PROPPHASE_SEED")) {
    try {
      sc.master_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("PROPPHASE_SEED is not an unsigned integer");
    }
  }
  sc.validate();

  const ScenarioResult result = run_scenario(sc, opt.workers);

  std::ostringstream csv;
  write_replications_csv(csv, sc, result.replications);
  write_file(opt.out_csv, csv.str());

  const json manifest = make_manifest(
      "simulate", json{{"scenario_id", sc.id()},
                       {"family", sc.family.to_string()},
                       {"m", sc.m},
                       {"regime", regime_name(sc.regime)},
                       {"reps", sc.reps},
                       {"seed", sc.master_seed},
                       {"workers", opt.workers},
                       {"out_csv", opt.out_csv},
                       {"out_json", opt.out_json}});
  write_file(opt.out_csv + ".manifest.json", manifest.dump(2) + "\n");

  json summary = json::parse(summary_json_text(sc, result));
  summary["manifest"] = manifest;
  write_file(opt.out_json, summary.dump(2) + "\n");

  for (const EstimatorKind est : sc.estimators) {
    const auto& s = result.summary.per_estimator.at(est);
    std::cout << sc.id() << ' ' << estimator_name(est)
              << " mean_delta=" << s.mean_delta << " sd_delta=" << s.sd_delta
              << " zero_fraction=" << s.zero_fraction << '\n';
  }
  return kExitOk;
}

struct CurvesOptions {
  std::string family;
  std::string what;
  std::optional<double> param;
  std::optional<double> t;
  double t_min = 0.0;
  double t_max = 10.0;
  double x_min = 0.0;
  double x_max = 10.0;
  int steps = 101;
  int grid_n = 400;
  int series_n = 20;
  std::string out_path;
};

int cmd_curves(const CurvesOptions& opt) {
  const FamilySpec fam = FamilySpec::parse(opt.family);
  KernelConfig cfg;
  cfg.grid_n = opt.grid_n;
  cfg.series_n = opt.series_n;
  if (opt.steps < 1) throw ConfigError("curves: --steps must be >= 1");

  std::ostringstream csv;
  char buf[80];
  if (opt.what == "psi") {
    if (!opt.param) throw ConfigError("curves: psi needs --param");
    if (!(opt.t_max >= opt.t_min)) throw ConfigError("curves: bad t range");
    csv << "t,psi\n";
    for (int i = 0; i < opt.steps; ++i) {
      const double t =
          opt.steps == 1
              ? opt.t_min
              : opt.t_min + (opt.t_max - opt.t_min) * i / (opt.steps - 1);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t,
                    psi_oracle(t, *opt.param, fam, cfg));
      csv << buf;
    }
  } else if (opt.what == "kernel") {
    if (!opt.t) throw ConfigError("curves: kernel needs --t");
    if (!(opt.x_max >= opt.x_min)) throw ConfigError("curves: bad x range");
    csv << "x,kernel\n";
    const KernelEvaluator kernel(fam, cfg, *opt.t);
    if (construction_for(fam) == Construction::II) {
      for (std::int64_t x = static_cast<std::int64_t>(std::ceil(opt.x_min));
           x <= static_cast<std::int64_t>(std::floor(opt.x_max)); ++x) {
        if (x < 0) continue;
        std::snprintf(buf, sizeof(buf), "%lld,%.17g\n",
                      static_cast<long long>(x),
                      kernel(static_cast<double>(x)));
        csv << buf;
      }
    } else {
      for (int i = 0; i < opt.steps; ++i) {
        const double x =
            opt.steps == 1
                ? opt.x_min
                : opt.x_min + (opt.x_max - opt.x_min) * i / (opt.steps - 1);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, kernel(x));
        csv << buf;
      }
    }
  } else {
    throw ConfigError("curves: --what must be psi or kernel");
  }

  if (opt.out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file(opt.out_path, csv.str());
    json config{{"family", fam.to_string()}, {"what", opt.what},
                {"grid", cfg.grid_n},        {"series_n", cfg.series_n},
                {"steps", opt.steps},        {"out", opt.out_path}};
    if (opt.param) config["param"] = *opt.param;
    if (opt.t) config["t"] = *opt.t;
    write_file(opt.out_path + ".manifest.json",
               make_manifest("curves", config).dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportion-of-false-nulls estimation via phase-function kernels"};
  app.require_subcommand(1);

  EstimateOptions est;
  CLI::App* sub_est = app.add_subcommand("estimate", "Estimate pi1 from a data file");
  sub_est->add_option("--family", est.family, "Family spec, e.g. \"gaussian sigma=1 null=0\"")->required();
  sub_est->add_option("--input", est.input, "CSV file with one z value per row")->required();
  sub_est->add_option("--t", est.t, "Kernel argument t");
  sub_est->add_option("--gamma", est.gamma, "Tuning gamma in (0,1] for the published schedule");
  sub_est->add_option("--eta-sup", est.eta_sup, "sup_i exp(theta_i), required by the Poisson schedule");
  sub_est->add_option("--u3", est.u3, "min_i(1-theta_i), required by the Gamma schedule");
  sub_est->add_option("--grid", est.grid_n, "Quadrature subintervals of [-1,1]")->capture_default_str();
  sub_est->add_option("--series-n", est.series_n, "Series truncation order")->capture_default_str();
  sub_est->add_option("--output", est.output, "json or csv")->capture_default_str();
  sub_est->add_option("--out", est.out_path, "Write report to file instead of stdout");

  SimulateOptions sim;
  CLI::App* sub_sim = app.add_subcommand("simulate", "Run a Monte Carlo scenario");
  sub_sim->add_option("--scenario", sim.scenario_path, "Scenario JSON config");
  sub_sim->add_option("--family", sim.family, "Family spec (inline scenario)");
  sub_sim->add_option("--m", sim.m, "Number of hypotheses");
  sub_sim->add_option("--regime", sim.regime, "dense|moderately_sparse|critically_sparse|very_sparse");
  sub_sim->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  sub_sim->add_option("--seed", sim.seed, "Master seed (PROPPHASE_SEED overrides)")->capture_default_str();
  sub_sim->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();
  sub_sim->add_option("--out-csv", sim.out_csv, "Replication CSV path")->capture_default_str();
  sub_sim->add_option("--out-json", sim.out_json, "Summary JSON path")->capture_default_str();

  CurvesOptions cur;
  CLI::App* sub_cur = app.add_subcommand("curves", "Dump psi or kernel tables for plotting");
  sub_cur->add_option("--family", cur.family, "Family spec")->required();
  sub_cur->add_option("--what", cur.what, "psi or kernel")->required();
  sub_cur->add_option("--param", cur.param, "Parameter for psi curves");
  sub_cur->add_option("--t", cur.t, "Kernel argument for kernel curves");
  sub_cur->add_option("--t-min", cur.t_min, "")->capture_default_str();
  sub_cur->add_option("--t-max", cur.t_max, "")->capture_default_str();
  sub_cur->add_option("--x-min", cur.x_min, "")->capture_default_str();
  sub_cur->add_option("--x-max", cur.x_max, "")->capture_default_str();
  sub_cur->add_option("--steps", cur.steps, "Rows in the table")->capture_default_str();
  sub_cur->add_option("--grid", cur.grid_n, "")->capture_default_str();
  sub_cur->add_option("--series-n", cur.series_n, "")->capture_default_str();
  sub_cur->add_option("--out", cur.out_path, "Write CSV to file instead of stdout");

  try {
    app.parse(argc, argv);
    if (sub_est->parsed()) return cmd_estimate(est);
    if (sub_sim->parsed()) return cmd_simulate(sim);
    if (sub_cur->parsed()) return cmd_curves(cur);
    return kExitArgs;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  } catch (const KernelOverflowError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SupportError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NoConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgs;
  } catch (const ConstructionMismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgs;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgs;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgs;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
