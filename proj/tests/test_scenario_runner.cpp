#include <doctest.h>

#include "fruc/scenario_runner.hpp"
#include "support/helpers.hpp"
#include "support/uc_oracle.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace fruc;
using testing_util::flat_profile;
using testing_util::group;
namespace fs = std::filesystem;

namespace {

RunOptions exact_options() {
  RunOptions o;
  o.solve.gap_tolerance = 1e-9;
  o.jobs = 1;
  return o;
}

// A single CCGT unit serving a flat 300 MW next to a pumped store. The
// loss is small enough for the one unit to cover every response need.
Scenario one_unit_day() {
  auto s = testing_util::scenario_with({group(Technology::Ccgt, 1, "ccgt")},
                                       flat_profile(24, 300));
  s.groups[0].pfr_max_mw = 60;
  s.groups[0].sfr_max_mw = 80;
  s.storage.push_back({"phs", 900, 0, 100, 100, 0.866, 30, 450});
  s.freq.infeed_loss_mw = 10;
  return s;
}

Scenario first_hours_of_toy(int hours) {
  auto s = load_scenario(fs::path(FRUC_DATA_DIR) / "toy_week.yaml");
  s.profile = s.profile.slice(0, hours);
  s.profile_path.reset();
  return s;
}

HourlyResult hour_with(int hour, double inertia, double demand, double pfr, double sfr) {
  HourlyResult h;
  h.hour = hour;
  h.inertia_mva_s = inertia;
  h.demand_mw = demand;
  h.pfr_req_mw = pfr;
  h.sfr_req_mw = sfr;
  return h;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST_CASE("one unit carries a flat day") {
  const auto s = one_unit_day();
  const auto r = run_scenario(s, 0.0, exact_options());
  REQUIRE(r.hours.size() == 24);
  for (const auto& h : r.hours) {
    CHECK(h.online[0] == 1);
    CHECK(h.dispatch_mw[0] == doctest::Approx(300));
    CHECK(h.discharge_mw[0] == doctest::Approx(0).epsilon(1e-9));
  }
  const auto& g = s.groups[0];
  const double hand = g.startup_cost + 24 * (g.no_load_cost + g.marginal_cost * 300);
  CHECK(r.total_cost == doctest::Approx(hand).epsilon(1e-9));
  CHECK(r.energy_cost == doctest::Approx(hand).epsilon(1e-9));
  CHECK(r.balancing_cost == doctest::Approx(0).epsilon(1e-9));
  CHECK(r.verification_failures == 0);

  // Independent check of the dispatch cost for the all-on commitment.
  std::vector<std::vector<int>> u(24, std::vector<int>{1});
  const auto lp = oracle::dispatch_cost(s, u);
  REQUIRE(lp.has_value());
  CHECK(*lp + g.startup_cost + 24 * g.no_load_cost == doctest::Approx(r.total_cost).epsilon(1e-9));
}

TEST_CASE("demand beyond the fleet is rejected before solving") {
  auto s = one_unit_day();
  s.profile.demand_mw *= 10.0;
  try {
    run_scenario(s, 0.0, exact_options());
    FAIL("expected ScenarioInvalid");
  } catch (const ScenarioInvalid& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].message == "demand exceeds total available supply at hour 1");
  }
  CHECK_THROWS_AS(run_scenario(one_unit_day(), -1.0), ScenarioInvalid);
}

TEST_CASE("response shortfall names the first bad hour") {
  // Hour 3 has so little spare capacity that the response cannot be held.
  auto s = testing_util::scenario_with({group(Technology::Ocgt, 30, "ocgt")},
                                       flat_profile(5, 3000));
  s.groups[0].pfr_max_mw = 60;
  s.groups[0].sfr_max_mw = 100;
  s.profile.demand_mw(2) = 5900;
  s.freq.infeed_loss_mw = 200;
  try {
    run_scenario(s, 0.0, exact_options());
    FAIL("expected SolveFailure");
  } catch (const SolveFailure& e) {
    const std::string what = e.what();
    CAPTURE(what);
    CHECK(what.find("window at hours 1-5") != std::string::npos);
    CHECK(what.find("first infeasible at hour 3") != std::string::npos);
  }
}

TEST_CASE("accounting identity and determinism") {
  const auto s = first_hours_of_toy(24);
  auto o = exact_options();
  o.solve.gap_tolerance = 1e-6;
  const auto r = run_scenario(s, 100.0, o);
  double recomputed = 0.0;
  for (const auto& h : r.hours)
    for (std::size_t g = 0; g < s.groups.size(); ++g)
      recomputed += s.groups[g].marginal_cost * h.dispatch_mw[g] +
                    s.groups[g].no_load_cost * h.online[g] +
                    s.groups[g].startup_cost * h.start_ups[g];
  CHECK(std::abs(recomputed - r.total_cost) <= 1e-3);
  CHECK(r.solver_objective == doctest::Approx(r.total_cost).epsilon(1e-9));
  CHECK(std::abs(r.energy_cost + r.balancing_cost - r.total_cost) <= 1e-3);
  CHECK(r.balancing_cost >= -1e-6 * r.total_cost);
  CHECK(r.verification_failures == 0);

  const auto again = run_scenario(s, 100.0, o);
  CHECK(again.total_cost == r.total_cost);
  for (std::size_t t = 0; t < r.hours.size(); ++t) {
    CHECK(again.hours[t].online == r.hours[t].online);
    CHECK(again.hours[t].pfr_req_mw == r.hours[t].pfr_req_mw);
  }
}

TEST_CASE("reported requirements and balances are consistent per hour") {
  const auto s = first_hours_of_toy(24);
  auto o = exact_options();
  o.solve.gap_tolerance = 1e-6;
  o.compute_balancing = false;
  const auto r = run_scenario(s, 0.0, o);
  const double k = nadir_constant(r.freq);
  for (const auto& h : r.hours) {
    double supply = h.wind_mw + h.solar_mw + h.interconnector_mw - h.curtailment_mw;
    double pfr = 0.0, sfr = 0.0, H = h.demand_mw * s.freq.load_inertia_s;
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
      supply += h.dispatch_mw[g];
      pfr += h.pfr_thermal_mw[g];
      sfr += h.sfr_thermal_mw[g];
      H += h.online[g] * s.groups[g].unit_capacity_mw * s.groups[g].inertia_constant_s;
    }
    for (std::size_t k2 = 0; k2 < s.storage.size(); ++k2) {
      supply += h.discharge_mw[k2] - h.charge_mw[k2];
      pfr += h.pfr_storage_mw[k2];
      sfr += h.sfr_storage_mw[k2];
    }
    CHECK(supply == doctest::Approx(h.demand_mw).epsilon(1e-7));
    CHECK(H == doctest::Approx(h.inertia_mva_s).epsilon(1e-9));
    CHECK(pfr >= h.pfr_req_mw - 1e-6);
    CHECK(sfr >= h.sfr_req_mw - 1e-6);
    CHECK(h.inertia_mva_s * h.pfr_req_mw >= k - 1e-3 * h.inertia_mva_s);
    CHECK(h.sfr_req_mw == doctest::Approx(1159.0));
    REQUIRE(h.verification.has_value());
    CHECK(h.verification->pass);
  }
}

TEST_CASE("two stitched windows stay close to one window") {
  const auto s = first_hours_of_toy(48);
  auto o = exact_options();
  o.solve.gap_tolerance = 1e-6;
  o.compute_balancing = false;
  o.verify = false;
  o.window_hours = 48;
  const auto whole = run_scenario(s, 0.0, o);
  o.window_hours = 24;
  const auto split = run_scenario(s, 0.0, o);
  REQUIRE(split.windows.size() == 2);
  CHECK(split.windows[1].first_hour == 24);
  CHECK(split.total_cost >= whole.total_cost * (1 - 1e-6));
  CHECK(std::abs(split.total_cost - whole.total_cost) <= 0.02 * whole.total_cost);
  // Commitment carries across the seam.
  for (std::size_t g = 0; g < s.groups.size(); ++g)
    CHECK(split.hours[24].online[g] - split.hours[24].start_ups[g] <= split.hours[23].online[g]);
}

TEST_CASE("EFR never raises the cost of a schedule") {
  const auto s = first_hours_of_toy(24);
  auto o = exact_options();
  o.solve.gap_tolerance = 1e-7;
  o.compute_balancing = false;
  o.verify = false;
  const auto sweep = efr_sweep(s, {0, 100, 200}, o);
  REQUIRE(sweep.rows.size() == 3);
  CHECK(sweep.rows[0].abatement == 0.0);
  CHECK(sweep.rows[0].value_per_mw == 0.0);
  CHECK(sweep.rows[1].abatement >= -1e-6 * sweep.rows[0].total_cost);
  CHECK(sweep.rows[2].total_cost <= sweep.rows[1].total_cost * (1 + 1e-6));
  CHECK(sweep.rows[1].mean_pfr_mw < sweep.rows[0].mean_pfr_mw);
  CHECK(sweep.rows[2].mean_pfr_mw < sweep.rows[1].mean_pfr_mw);
  CHECK(sweep.rows[1].mean_sfr_mw == sweep.rows[0].mean_sfr_mw);
  CHECK(sweep.rows[2].mean_sfr_mw == sweep.rows[0].mean_sfr_mw);
  CHECK(sweep.rows[1].value_per_mw == doctest::Approx(sweep.rows[1].abatement / 100));
  for (std::size_t t = 0; t < sweep.runs[0].hours.size(); ++t)
    CHECK(sweep.runs[2].hours[t].sfr_req_mw == sweep.runs[0].hours[t].sfr_req_mw);

  CHECK_THROWS_AS(efr_sweep(s, {100, 200}, o), ScenarioInvalid);
  CHECK_THROWS_AS(efr_sweep(s, {0, 200, 100}, o), ScenarioInvalid);
  CHECK_THROWS_AS(efr_sweep(s, {0, 0, 100}, o), ScenarioInvalid);
  CHECK_THROWS_AS(efr_sweep(s, {}, o), ScenarioInvalid);
}

TEST_CASE("meteorological seasons") {
  CHECK(season_of_hour(0, 0) == Season::Winter);
  CHECK(season_of_hour(0, 24 * 58) == Season::Winter);
  CHECK(season_of_hour(0, 24 * 59) == Season::Spring);
  CHECK(season_of_hour(151, 0) == Season::Summer);
  CHECK(season_of_hour(150, 23) == Season::Spring);
  CHECK(season_of_hour(150, 24) == Season::Summer);
  CHECK(season_of_hour(243, 0) == Season::Autumn);
  CHECK(season_of_hour(334, 0) == Season::Winter);
  CHECK(season_of_hour(364, 24) == Season::Winter);  // wraps to 1 January
  CHECK(to_string(Season::Summer) == "summer");
}

TEST_CASE("seasonal report on synthetic hours") {
  // One day per season, the summer day with the lowest inertia.
  const FrequencyParams f;
  const double k0 = nadir_constant(f, 0), k1 = nadir_constant(f, 100);
  ScenarioResult without, with;
  const std::vector<std::pair<int, double>> days{{15, 300000}, {100, 220000}, {190, 125000}, {280, 200000}};
  for (auto [day, H] : days)
    for (int t = 0; t < 24; ++t) {
      without.hours.push_back(hour_with(24 * day + t, H, 30000, k0 / H, 1159));
      with.hours.push_back(hour_with(24 * day + t, H, 30000, k1 / H, 1159));
    }
  const auto rows = seasonal_report(without, with);
  REQUIRE(rows.size() == 4);
  const SeasonRow* best = &rows[0];
  for (const auto& r : rows) {
    CHECK(r.hours == 24);
    CHECK(r.sfr_offset == 0.0);
    if (r.pfr_offset > best->pfr_offset) best = &r;
  }
  CHECK(best->season == Season::Summer);
  CHECK(best->mean_inertia_mva_s == 125000);

  for (const auto& r : seasonal_report(without, without)) {
    CHECK(r.pfr_offset == 0.0);
    CHECK(r.sfr_offset == 0.0);
  }
  with.hours.pop_back();
  CHECK_THROWS_AS(seasonal_report(without, with), std::invalid_argument);
}

TEST_CASE("closed-form offset per MW of EFR") {
  const FrequencyParams f;
  CHECK(closed_form_offset_per_mw(f, 100, 125000) == doctest::Approx(3.175));
  CHECK(closed_form_offset_per_mw(f, 100, 198000) == doctest::Approx(2.0044).epsilon(1e-4));
  CHECK_THROWS_AS(closed_form_offset_per_mw(f, 0, 125000), std::invalid_argument);
}

TEST_CASE("effectiveness grid binning") {
  const FrequencyParams f;
  const double k0 = nadir_constant(f, 0), k1 = nadir_constant(f, 100);
  ScenarioResult without, with;
  for (int t = 0; t < 40; ++t) {
    const double H = 120000 + 5000 * t;
    const double d = 20000 + 500 * t;
    without.hours.push_back(hour_with(t, H, d, k0 / H, 1159));
    with.hours.push_back(hour_with(t, H, d, k1 / H, 1159));
  }
  const auto g = effectiveness_grid(without, with, 100, 4);
  int total = 0;
  for (const auto& c : g.cells) total += c.count;
  CHECK(total == 40);
  CHECK(g.inertia_demand_correlation == doctest::Approx(1.0));
  // Perfectly correlated inputs fill only the diagonal.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK((g.cell(i, j).count > 0) == (i == j));
  for (int i = 1; i < 4; ++i)
    CHECK(g.cell(i, i).mean_offset_per_mw < g.cell(i - 1, i - 1).mean_offset_per_mw);
  CHECK(g.hourly_offset_per_mw(0) == doctest::Approx(closed_form_offset_per_mw(f, 100, 120000)));

  for (auto& h : without.hours) h.inertia_mva_s = 150000;
  const auto flat = effectiveness_grid(without, with, 100, 4);
  int populated_columns = 0;
  for (int i = 0; i < 4; ++i) {
    int n = 0;
    for (int j = 0; j < 4; ++j) n += flat.cell(i, j).count;
    if (n > 0) ++populated_columns;
  }
  CHECK(populated_columns == 1);
  CHECK_THROWS_AS(effectiveness_grid(without, with, 0, 4), std::invalid_argument);
}

TEST_CASE("rank statistics") {
  const auto x = testing_util::vec({3, 1, 4, 1, 5});
  CHECK(ranks(x) == testing_util::vec({3, 1.5, 4, 1.5, 5}));
  CHECK(pearson(testing_util::vec({1, 2, 3}), testing_util::vec({2, 4, 6})) == doctest::Approx(1));
  CHECK(pearson(testing_util::vec({1, 2, 3}), testing_util::vec({5, 5, 5})) == 0.0);
  // Monotone but nonlinear: Spearman is exactly -1.
  const auto h = testing_util::vec({1, 2, 3, 4, 5, 6});
  const Eigen::VectorXd off = h.cwiseInverse();
  CHECK(spearman(h, off) == doctest::Approx(-1.0));
  CHECK(pearson(h, off) > -1.0);
  CHECK_THROWS_AS(pearson(testing_util::vec({1}), testing_util::vec({1})), std::invalid_argument);
}

TEST_CASE("permutation p-value") {
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(30, 1, 30);
  const Eigen::VectorXd y = -x;
  const double p = spearman_negative_p_value(x, y, 999);
  CHECK(p == doctest::Approx(1.0 / 1000));
  CHECK(spearman_negative_p_value(x, x, 999) > 0.99);
  CHECK(spearman_negative_p_value(x, y, 999, 7) == spearman_negative_p_value(x, y, 999, 7));
}

TEST_CASE("result files and re-verification") {
  const auto s = one_unit_day();
  const auto r = run_scenario(s, 0.0, exact_options());
  const fs::path dir = fs::temp_directory_path() / "fruc_runner_out";
  fs::create_directories(dir);
  write_hourly_csv(dir / "hourly.csv", r);
  write_summary_json(dir / "summary.json", r);

  const auto lines = read_lines(dir / "hourly.csv");
  REQUIRE(lines.size() == 25);
  CHECK(lines[0] ==
        "hour,demand_mw,wind_mw,solar_mw,interconnector_mw,curtailment_mw,damping_demand_mw,"
        "inertia_mva_s,pfr_req_mw,sfr_req_mw,pfr_binding,cost_gbp,pgen_ccgt,online_ccgt,"
        "startups_ccgt,pfr_ccgt,sfr_ccgt,charge_phs,discharge_phs,energy_phs,pfr_phs,sfr_phs,"
        "nadir_hz,qss_hz,verified");
  CHECK(lines[1].rfind("1,300,", 0) == 0);

  std::ifstream js(dir / "summary.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j.at("hours").get<int>() == 24);
  CHECK(j.at("costs_gbp").at("total").get<double>() == doctest::Approx(r.total_cost));
  CHECK(j.at("verification").at("failures").get<int>() == 0);

  const auto v = verify_saved_result(dir);
  CHECK(v.hours == 24);
  CHECK(v.failures == 0);

  SweepResult sweep;
  sweep.rows.push_back({0, 10, 1, 2, 0, 0});
  write_sweep_csv(dir / "sweep.csv", sweep);
  CHECK(read_lines(dir / "sweep.csv").size() == 2);
  fs::remove_all(dir);
  CHECK_THROWS_AS(verify_saved_result(dir), InputError);
}
