#include "fruc/scenario_runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace fruc {

namespace {

struct CommonFlags {
  std::string scenario;
  std::string solver = "highs";
  std::string solver_path;
  int window_hours = 168;
  int segments = 16;
  double gap = 1e-4;
  double time_limit = 600.0;
  int jobs = 0;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("scenario", f.scenario, "Scenario file (YAML)")->required();
  cmd->add_option("--solver", f.solver, "highs | subprocess")
      ->check(CLI::IsMember({"highs", "subprocess"}));
  cmd->add_option("--solver-path", f.solver_path,
                  std::string("External solver executable (else $") + kSolverPathEnv + ")");
  cmd->add_option("--windows", f.window_hours, "Rolling window length in hours")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--segments", f.segments, "Chord segments for the nadir curve")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gap", f.gap, "Relative MIP gap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--time-limit", f.time_limit, "Per-window time limit in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", f.jobs, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--verbose", f.verbose, "Show solver log");
}

RunOptions options_from(const CommonFlags& f) {
  RunOptions o;
  o.solver = f.solver;
  if (!f.solver_path.empty()) o.solver_path = f.solver_path;
  o.window_hours = f.window_hours;
  o.n_segments = f.segments;
  o.solve.gap_tolerance = f.gap;
  o.solve.time_limit_s = f.time_limit;
  o.solve.verbose = f.verbose;
  o.jobs = f.jobs;
  return o;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size())
      throw InputError("bad EFR level '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
}

void print_result(const ScenarioResult& r) {
  std::cout << r.scenario << ": E = " << r.efr_mw << " MW, " << r.hours.size()
            << " h, total cost " << r.total_cost << " GBP";
  if (r.balancing_computed) std::cout << " (balancing " << r.balancing_cost << " GBP)";
  std::cout << '\n';
  for (const auto& h : r.hours)
    if (h.verification && !h.verification->pass)
      std::cerr << "hour " << h.hour + 1 << ": " << h.verification->message << '\n';
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Frequency-constrained unit commitment"};
  app.require_subcommand(1);

  CommonFlags run_f;
  double efr = 0.0;
  std::string run_out = "results";
  bool no_balancing = false;
  auto* run = app.add_subcommand("run", "Schedule a scenario and verify every hour");
  add_common(run, run_f);
  run->add_option("--efr", efr, "EFR capacity in MW")->check(CLI::NonNegativeNumber);
  run->add_option("--out", run_out, "Output directory");
  run->add_flag("--no-balancing", no_balancing, "Skip the FR-free reference solve");

  CommonFlags sweep_f;
  std::string levels_text = "0,100,200";
  std::string sweep_out = "results";
  int bins = 8;
  auto* sweep = app.add_subcommand("sweep", "Run a list of EFR levels");
  add_common(sweep, sweep_f);
  sweep->add_option("--levels", levels_text, "Comma-separated EFR levels in MW");
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--bins", bins, "Bins per axis of the effectiveness grid")
      ->check(CLI::PositiveNumber);

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Re-check a saved result with the swing equation");
  verify->add_option("dir", verify_dir, "Directory holding summary.json and hourly.csv")
      ->required();

  std::string export_scenario, format = "lp", export_out;
  double export_efr = 0.0;
  int export_segments = 16;
  bool no_fr = false;
  auto* exp = app.add_subcommand("export-model", "Write the model as LP or MPS without solving");
  exp->add_option("scenario", export_scenario, "Scenario file (YAML)")->required();
  exp->add_option("--format", format, "lp | mps")->check(CLI::IsMember({"lp", "mps"}));
  exp->add_option("--efr", export_efr, "EFR capacity in MW")->check(CLI::NonNegativeNumber);
  exp->add_option("--segments", export_segments, "Chord segments")->check(CLI::PositiveNumber);
  exp->add_flag("--no-fr", no_fr, "Leave out the frequency-response layer");
  exp->add_option("--out", export_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      RunOptions o = options_from(run_f);
      o.compute_balancing = !no_balancing;
      const ScenarioResult r = run_scenario(load_scenario(run_f.scenario), efr, o);
      ensure_dir(run_out);
      write_summary_json(std::filesystem::path(run_out) / "summary.json", r);
      write_hourly_csv(std::filesystem::path(run_out) / "hourly.csv", r);
      print_result(r);
      return r.verification_failures == 0 ? 0 : 1;
    }
    if (*sweep) {
      const auto levels = parse_levels(levels_text);
      const Scenario s = load_scenario(sweep_f.scenario);
      const SweepResult res = efr_sweep(s, levels, options_from(sweep_f));
      const std::filesystem::path dir(sweep_out);
      ensure_dir(dir);
      write_sweep_csv(dir / "sweep.csv", res);
      int failures = 0;
      for (const auto& r : res.runs) {
        std::ostringstream stem;
        stem << "efr_" << r.efr_mw;
        write_hourly_csv(dir / ("hourly_" + stem.str() + ".csv"), r);
        failures += r.verification_failures;
        print_result(r);
      }
      if (res.runs.size() > 1) {
        const auto& base = res.runs.front();
        const auto& first = res.runs[1];
        write_seasonal_csv(dir / "seasonal.csv", seasonal_report(base, first));
        write_grid_csv(dir / "grid.csv", effectiveness_grid(base, first, first.efr_mw, bins));
      }
      return failures == 0 ? 0 : 1;
    }
    if (*verify) {
      const VerifyOutcome v = verify_saved_result(verify_dir);
      for (const auto& m : v.messages) std::cerr << m << '\n';
      std::cout << v.hours - v.failures << "/" << v.hours << " hours pass\n";
      return v.failures == 0 ? 0 : 1;
    }
    if (*exp) {
      Scenario s = load_scenario(export_scenario);
      s.freq.efr_mw = export_efr;
      if (auto v = validate_scenario(s); !v.empty()) throw ScenarioInvalid(std::move(v));
      if (s.freq.damping_mode == DampingDemandMode::ConstantReference &&
          !s.freq.damping_reference_mw)
        s.freq.damping_reference_mw = s.profile.demand_mw.mean();
      const auto built = build_model(s, !no_fr, export_segments);
      const std::string text =
          export_model(built.model, format == "lp" ? ExportFormat::Lp : ExportFormat::Mps);
      if (export_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(export_out);
        if (!out) throw InputError("cannot write " + export_out);
        out << text;
      }
      return 0;
    }
  } catch (const SolveFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverUnavailable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace fruc
