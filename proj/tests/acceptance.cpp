// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include "fruc/scenario_runner.hpp"
#include "support/helpers.hpp"
#include "support/tiny_instances.hpp"
#include "support/uc_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <limits>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fruc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Scenario data_scenario(const char* file) {
  return load_scenario(fs::path(FRUC_DATA_DIR) / file);
}

// Week-long baseline solves are the slow part; a 0.1% gap keeps them to
// seconds on one core.
RunOptions baseline_options() {
  RunOptions o;
  o.solve.gap_tolerance = 1e-3;
  o.compute_balancing = false;
  return o;
}

RunOptions toy_options() {
  RunOptions o;
  o.solve.gap_tolerance = 1e-7;
  o.compute_balancing = false;
  return o;
}

const std::vector<ScenarioResult>& baseline_runs() {
  static const std::vector<ScenarioResult> runs = [] {
    const auto s = data_scenario("baseline_week.yaml");
    return std::vector<ScenarioResult>{run_scenario(s, 0.0, baseline_options()),
                                       run_scenario(s, 100.0, baseline_options())};
  }();
  return runs;
}

const SweepResult& toy_sweep() {
  static const SweepResult sweep =
      efr_sweep(data_scenario("toy_week.yaml"), {0.0, 100.0, 200.0}, toy_options());
  return sweep;
}

// ---------------------------------------------------------------------------

Outcome nadir_anchor() {
  // CCGT fleet with inertia pinned to 198 GVA s: 56 units at 3000 MVA s
  // each plus 30 GW of load at 1 s.
  auto g = table_one_group(Technology::Ccgt, 60);
  g.pfr_max_mw = 60;
  g.sfr_max_mw = 80;
  auto s = testing_util::scenario_with({g}, testing_util::flat_profile(1, 30000, 10000));
  s.initial_state[0] = {56, 20000};
  s.freq.damping_reference_mw = 32200;

  auto built = build_model(s, true, 64);
  built.model.set_bounds(built.index.inertia[0], 198000, 198000);
  // A small price on P_req makes it sit on its tightest cut.
  built.model.set_objective_coef(built.index.pfr_req[0], 1e-3);
  const auto sol = testing_util::solve_exact(built.model);
  if (!sol.has_values()) return {false, "solver status " + to_string(sol.status)};
  const double p = sol[built.index.pfr_req[0]];
  const double vs_published = std::abs(p - 1366.0) / 1366.0;
  return {std::abs(p - 1375.0) <= 1.0 && vs_published <= 0.02,
          fmt("P_req = %.2f MW at H = 198000 (n = 64); %.2f%% from 1366 MW", p, 100 * vs_published)};
}

Outcome qss_anchor() {
  double worst = 0.0;
  int checked = 0;
  for (const char* file : {"baseline_week.yaml", "toy_week.yaml"}) {
    auto s = data_scenario(file);
    for (double e : {0.0, 100.0, 200.0}) {
      s.freq.efr_mw = e;
      for (int t = 0; t < s.horizon(); ++t, ++checked)
        worst = std::max(worst, std::abs(sfr_floor(s, t) - 1159.0));
    }
  }
  for (const auto& r : baseline_runs())
    for (const auto& h : r.hours) {
      worst = std::max(worst, std::abs(h.sfr_req_mw - 1159.0));
      ++checked;
    }
  for (const auto& r : toy_sweep().runs)
    for (const auto& h : r.hours) {
      worst = std::max(worst, std::abs(h.sfr_req_mw - 1159.0));
      ++checked;
    }
  return {worst <= 1e-9, fmt("%.0f hourly values, max |S_req - 1159| = %.2e MW", checked, worst)};
}

Outcome offset_structure() {
  const auto& r0 = baseline_runs()[0];
  const auto& r1 = baseline_runs()[1];
  const double mean0 = r0.column(&HourlyResult::pfr_req_mw).mean();
  const double mean1 = r1.column(&HourlyResult::pfr_req_mw).mean();
  double s_diff = 0.0;
  int binding = 0, reduced = 0;
  double min_reduction = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < r0.hours.size(); ++t) {
    s_diff = std::max(s_diff, std::abs(r0.hours[t].sfr_req_mw - r1.hours[t].sfr_req_mw));
    if (r0.hours[t].pfr_binding != PfrBinding::NadirChord) continue;
    ++binding;
    const double cut = r0.hours[t].pfr_req_mw - r1.hours[t].pfr_req_mw;
    min_reduction = std::min(min_reduction, cut);
    if (cut > 0.0) ++reduced;
  }
  const bool ok = mean1 < mean0 && s_diff <= 1e-6 && reduced == binding;
  return {ok, fmt("mean P_req %.1f -> %.1f MW; max |dS| = %.1e; ", mean0, mean1, s_diff) +
                  fmt("%.0f/%.0f chord hours reduced (min %.1f MW)", reduced, binding,
                      min_reduction)};
}

Outcome effectiveness() {
  const FrequencyParams f;
  bool closed_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double h = 100000; h <= 350000; h += 5000) {
    const double o = closed_form_offset_per_mw(f, 100, h);
    closed_ok = closed_ok && o < prev;
    prev = o;
  }

  const auto& r0 = baseline_runs()[0];
  const auto& r1 = baseline_runs()[1];
  const auto grid = effectiveness_grid(r0, r1, 100.0, 8);
  std::vector<double> hs, offs;
  for (const auto& c : grid.cells)
    if (c.count > 0) {
      hs.push_back(0.5 * (c.h_lo + c.h_hi));
      offs.push_back(c.mean_offset_per_mw);
    }
  const Eigen::Map<const Eigen::VectorXd> x(hs.data(), static_cast<Eigen::Index>(hs.size()));
  const Eigen::Map<const Eigen::VectorXd> y(offs.data(), static_cast<Eigen::Index>(offs.size()));
  const double rho = spearman(x, y);
  const double p = spearman_negative_p_value(x, y, 5000);
  const double rho_hourly = spearman(grid.hourly_inertia, grid.hourly_offset_per_mw);
  const double p_hourly = spearman_negative_p_value(grid.hourly_inertia, grid.hourly_offset_per_mw, 5000);
  const bool ok = closed_ok && rho < 0.0 && p < 0.05;
  std::string detail = closed_ok ? "closed form decreasing; " : "closed form NOT decreasing; ";
  detail += fmt("binned rho = %.3f (p = %.4f, %.0f cells); ", rho, p, static_cast<double>(hs.size()));
  detail += fmt("hourly rho = %.3f (p = %.4f)", rho_hourly, p_hourly);
  return {ok, detail};
}

Outcome saturation() {
  const auto& rows = toy_sweep().rows;
  const double first = rows[1].abatement - rows[0].abatement;
  const double second = rows[2].abatement - rows[1].abatement;
  return {second <= first,
          fmt("abatement 0->100: %.0f GBP, 100->200: %.0f GBP (gaps %.1e, %.1e)", first, second,
              toy_sweep().runs[1].windows[0].mip_gap, toy_sweep().runs[2].windows[0].mip_gap)};
}

Outcome swing_consistency() {
  struct Pick {
    const ScenarioResult* run;
    std::size_t hour;
  };
  std::vector<Pick> pool;
  for (const auto& r : baseline_runs())
    for (std::size_t t = 0; t < r.hours.size(); ++t) pool.push_back({&r, t});
  for (const auto& r : toy_sweep().runs)
    for (std::size_t t = 0; t < r.hours.size(); ++t) pool.push_back({&r, t});
  std::mt19937 rng(20181);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(200);

  const RunOptions defaults;
  double worst_nadir = 0.0, worst_qss = -1e9;
  int fails = 0;
  for (const auto& pick : pool) {
    const auto& r = *pick.run;
    const auto tr = simulate(portfolio_for_hour(r.freq, r.efr_mw, r.hours[pick.hour]),
                             defaults.verify_dt_s, defaults.verify_t_end_s);
    worst_nadir = std::max(worst_nadir, tr.nadir_hz);
    worst_qss = std::max(worst_qss, tr.qss_hz);
    if (tr.nadir_hz > r.freq.delta_f_max_hz + 1e-3 || tr.qss_hz > r.freq.delta_f_ss_hz + 1e-3)
      ++fails;
  }

  // Undamped portfolios sitting exactly on the nadir constant.
  const FrequencyParams f;
  double worst_exact = 0.0;
  for (double h : {90000.0, 120000.0, 150000.0, 180000.0, 200000.0}) {
    ResponsePortfolio p;
    p.inertia_mva_s = h;
    p.pfr_mw = nadir_constant(f, 0.0) / h;
    p.sfr_mw = p.pfr_mw;
    p.infeed_loss_mw = f.infeed_loss_mw;
    worst_exact = std::max(worst_exact, std::abs(simulate(p).nadir_hz - 0.8));
  }
  const bool ok = fails == 0 && worst_exact <= 0.002;
  return {ok, fmt("200 sampled hours: %.0f failures, max nadir %.4f Hz, max qss %.4f Hz; ",
                  fails, worst_nadir, worst_qss) +
                  fmt("D = 0 on-limit portfolios within %.5f Hz of 0.8", worst_exact)};
}

Outcome oracle_equivalence() {
  int feasible = 0, mismatches = 0;
  double worst = 0.0;
  for (unsigned seed = 1; seed <= 25; ++seed) {
    const auto s = oracle::random_tiny_scenario(seed);
    const auto ref = oracle::solve_uc_by_enumeration(s);
    const auto sol = testing_util::solve_exact(build_model(s, false, 4).model);
    if (!ref.feasible) {
      if (sol.status != SolveStatus::Infeasible) ++mismatches;
      continue;
    }
    ++feasible;
    if (!sol.has_values()) {
      ++mismatches;
      continue;
    }
    const double rel = std::abs(sol.objective - ref.objective) / std::max(1.0, std::abs(ref.objective));
    worst = std::max(worst, rel);
    if (rel > 1e-4) ++mismatches;
  }
  return {mismatches == 0,
          fmt("25 instances (%.0f feasible), %.0f mismatches, worst relative gap %.2e", feasible,
              mismatches, worst)};
}

Outcome convergence() {
  const auto s = data_scenario("toy_week.yaml");
  std::vector<double> cost;
  std::string detail = "objective by n:";
  for (int n : {2, 4, 8, 16, 32}) {
    RunOptions o = toy_options();
    o.n_segments = n;
    o.verify = false;
    cost.push_back(run_scenario(s, 0.0, o).total_cost);
    detail += fmt(" %.0f:%.0f", n, cost.back());
  }
  bool monotone = true;
  for (std::size_t i = 1; i < cost.size(); ++i) monotone = monotone && cost[i] <= cost[i - 1];
  const double gap = (cost[3] - cost[4]) / cost[4];
  return {monotone && gap >= 0.0 && gap < 1e-3, detail + fmt("; 16 vs 32 gap %.4f%%", 100 * gap)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"nadir requirement anchor", nadir_anchor},
      {"QSS requirement anchor", qss_anchor},
      {"EFR offsets PFR but not SFR", offset_structure},
      {"per-MW offset falls with inertia", effectiveness},
      {"abatement saturates", saturation},
      {"swing equation agrees with the schedule", swing_consistency},
      {"MILP matches enumeration", oracle_equivalence},
      {"chord refinement converges", convergence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail << fmt(" [%.1f s]", secs) << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
