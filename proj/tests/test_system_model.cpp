#include <doctest.h>

#include "fruc/system_model.hpp"
#include "support/helpers.hpp"

#include <filesystem>
#include <fstream>

using namespace fruc;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "fruc_system_model_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

const char* kHeader = "period,demand_mw,wind_mw,solar_mw,interconnector_mw\n";

bool has_message(const std::vector<Violation>& v, const std::string& needle) {
  for (const auto& x : v)
    if (x.message.find(needle) != std::string::npos) return true;
  return false;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

Scenario adequate_baseline() {
  using testing_util::group;
  auto s = testing_util::scenario_with(
      {group(Technology::Nuclear, 5, "nuclear"), group(Technology::Coal, 20, "coal"),
       group(Technology::Ccgt, 60, "ccgt"), group(Technology::Ocgt, 10, "ocgt")},
      testing_util::flat_profile(24, 30000, 4000, 1000, 500));
  for (auto& g : s.groups) {
    g.pfr_max_mw = 50;
    g.sfr_max_mw = 70;
  }
  return s;
}

void require_same(const Scenario& a, const Scenario& b) {
  CHECK(a.name == b.name);
  CHECK(a.start_day_of_year == b.start_day_of_year);
  REQUIRE(a.groups.size() == b.groups.size());
  for (std::size_t i = 0; i < a.groups.size(); ++i) {
    const auto& x = a.groups[i];
    const auto& y = b.groups[i];
    CHECK(x.name == y.name);
    CHECK(x.technology == y.technology);
    CHECK(x.n_units == y.n_units);
    CHECK(x.unit_capacity_mw == y.unit_capacity_mw);
    CHECK(x.marginal_cost == y.marginal_cost);
    CHECK(x.no_load_cost == y.no_load_cost);
    CHECK(x.startup_cost == y.startup_cost);
    CHECK(x.msg_mw == y.msg_mw);
    CHECK(x.startup_time_h == y.startup_time_h);
    CHECK(x.shutdown_time_h == y.shutdown_time_h);
    CHECK(x.ramp_up_mw_per_h == y.ramp_up_mw_per_h);
    CHECK(x.ramp_down_mw_per_h == y.ramp_down_mw_per_h);
    CHECK(x.governor_slope == y.governor_slope);
    CHECK(x.inertia_constant_s == y.inertia_constant_s);
    CHECK(x.pfr_max_mw == y.pfr_max_mw);
    CHECK(x.sfr_max_mw == y.sfr_max_mw);
    CHECK(a.initial_state[i].units_online == b.initial_state[i].units_online);
    CHECK(a.initial_state[i].output_mw == b.initial_state[i].output_mw);
  }
  REQUIRE(a.storage.size() == b.storage.size());
  for (std::size_t i = 0; i < a.storage.size(); ++i) {
    const auto& x = a.storage[i];
    const auto& y = b.storage[i];
    CHECK(x.name == y.name);
    CHECK(x.e_max_mwh == y.e_max_mwh);
    CHECK(x.e_min_mwh == y.e_min_mwh);
    CHECK(x.p_charge_max_mw == y.p_charge_max_mw);
    CHECK(x.p_discharge_max_mw == y.p_discharge_max_mw);
    CHECK(x.efficiency == y.efficiency);
    CHECK(x.fr_max_mw == y.fr_max_mw);
    CHECK(x.e_initial_mwh == y.e_initial_mwh);
  }
  CHECK(a.profile.demand_mw == b.profile.demand_mw);
  CHECK(a.profile.wind_mw == b.profile.wind_mw);
  CHECK(a.profile.solar_mw == b.profile.solar_mw);
  CHECK(a.profile.interconnector_mw == b.profile.interconnector_mw);
  const auto& f = a.freq;
  const auto& g = b.freq;
  CHECK(f.f_nominal_hz == g.f_nominal_hz);
  CHECK(f.delta_f_max_hz == g.delta_f_max_hz);
  CHECK(f.delta_f_ss_hz == g.delta_f_ss_hz);
  CHECK(f.t_pfr_s == g.t_pfr_s);
  CHECK(f.t_efr_s == g.t_efr_s);
  CHECK(f.efr_mw == g.efr_mw);
  CHECK(f.infeed_loss_mw == g.infeed_loss_mw);
  CHECK(f.damping_per_hz == g.damping_per_hz);
  CHECK(f.load_inertia_s == g.load_inertia_s);
  CHECK(f.damping_mode == g.damping_mode);
  CHECK(f.damping_reference_mw == g.damping_reference_mw);
  CHECK(f.qss_includes_efr == g.qss_includes_efr);
}

}  // namespace

TEST_CASE("profiles read back exactly") {
  const auto p = temp_file("three.csv", std::string(kHeader) +
                                            "1,100,10,0,0\n2,200,0,0,0\n3,150,5,0,0\n");
  const auto prof = load_profiles(p, 3);
  CHECK(prof.demand_mw == testing_util::vec({100, 200, 150}));
  CHECK(prof.wind_mw == testing_util::vec({10, 0, 5}));
  CHECK(prof.solar_mw.isZero());
  CHECK(prof.interconnector_mw.isZero());

  const auto two = load_profiles(p, 2);
  CHECK(two.horizon() == 2);
  CHECK(two.demand_mw == testing_util::vec({100, 200}));
}

TEST_CASE("profile errors name the offending row") {
  const auto neg = temp_file("neg.csv", std::string(kHeader) + "1,100,0,0,0\n2,-5,0,0,0\n");
  CHECK(error_of([&] { load_profiles(neg, 2); }).find("row 2") != std::string::npos);

  const auto bad = temp_file("bad.csv", std::string(kHeader) + "1,100,0,0,0\n2,1x0,0,0,0\n");
  CHECK(error_of([&] { load_profiles(bad, 2); }).find("row 2: malformed") != std::string::npos);

  const auto few = temp_file("few.csv", std::string(kHeader) + "1,100,0,0\n");
  CHECK(error_of([&] { load_profiles(few, 1); }).find("expected 5 fields") != std::string::npos);

  const auto shrt = temp_file("short.csv", std::string(kHeader) + "1,100,0,0,0\n");
  CHECK(error_of([&] { load_profiles(shrt, 4); }).find("expected 4 rows, found 1") !=
        std::string::npos);

  const auto hdr = temp_file("hdr.csv", "t,d,w,s,i\n1,1,1,1,1\n");
  CHECK_THROWS_AS(load_profiles(hdr, 1), InputError);
  CHECK_THROWS_AS(load_profiles("/nonexistent/profile.csv", 1), InputError);

  // Imports may be negative.
  const auto exports = temp_file("exp.csv", std::string(kHeader) + "1,100,0,0,-300\n");
  CHECK(load_profiles(exports, 1).interconnector_mw(0) == -300);
}

TEST_CASE("profile files survive a write and read") {
  auto prof = testing_util::flat_profile(5, 1234.5, 10.25, 3.0, -7.125);
  prof.demand_mw(2) = 1.0 / 3.0;
  const fs::path p = fs::temp_directory_path() / "fruc_system_model_test" / "rt.csv";
  write_profiles(p, prof);
  const auto back = load_profiles(p, 5);
  CHECK(back.demand_mw == prof.demand_mw);
  CHECK(back.interconnector_mw == prof.interconnector_mw);
}

TEST_CASE("table one parameters") {
  const auto nuc = table_one_group(Technology::Nuclear, 1);
  const auto coal = table_one_group(Technology::Coal, 1);
  const auto ccgt = table_one_group(Technology::Ccgt, 1);
  const auto ocgt = table_one_group(Technology::Ocgt, 1);

  CHECK(nuc.unit_capacity_mw == 1800);
  CHECK(coal.unit_capacity_mw == 500);
  CHECK(ccgt.unit_capacity_mw == 500);
  CHECK(ocgt.unit_capacity_mw == 200);
  CHECK(nuc.startup_cost == 50548);
  CHECK(coal.startup_cost == 21001);
  CHECK(ccgt.startup_cost == 12564);
  CHECK(ocgt.startup_cost == 0);
  CHECK(nuc.marginal_cost == 7.1);
  CHECK(coal.marginal_cost == 19.8);
  CHECK(ccgt.marginal_cost == 18.93);
  CHECK(ocgt.marginal_cost == 39.54);
  CHECK(coal.no_load_cost == 2071);
  CHECK(ccgt.no_load_cost == 2476);
  CHECK(ocgt.no_load_cost == 4809);
  CHECK(nuc.msg_mw == 1800);
  CHECK(coal.msg_mw == 200);
  CHECK(ccgt.msg_mw == 200);
  CHECK(ocgt.msg_mw == 0);
  CHECK(coal.startup_time_h == 4);
  CHECK(ccgt.shutdown_time_h == 2);
  CHECK(ocgt.startup_time_h == 0);
  CHECK(coal.governor_slope == 0.3);
  CHECK(ccgt.governor_slope == 0.4);
  CHECK(ocgt.governor_slope == 0.6);
  CHECK(nuc.inertia_constant_s == 4);
  CHECK(coal.inertia_constant_s == 6);
  CHECK(coal.ramp_down_mw_per_h == 240);
  CHECK(coal.ramp_up_mw_per_h == 200);
  CHECK(ccgt.ramp_up_mw_per_h == 360);
  CHECK(ocgt.ramp_down_mw_per_h == 200);
  CHECK(nuc.must_run());
  CHECK_FALSE(coal.must_run());
}

TEST_CASE("an adequate fleet validates cleanly and repeatably") {
  const auto s = adequate_baseline();
  CHECK(validate_scenario(s).empty());
  auto bad = s;
  bad.groups[1].msg_mw = 600;
  CHECK(validate_scenario(bad) == validate_scenario(bad));
}

TEST_CASE("validation reports each broken invariant") {
  auto s = adequate_baseline();

  SUBCASE("msg above capacity") {
    s.groups[2].unit_capacity_mw = 500;
    s.groups[2].msg_mw = 600;
    CHECK(has_message(validate_scenario(s), "msg exceeds capacity"));
  }
  SUBCASE("qss bound above nadir bound") {
    s.freq.delta_f_ss_hz = 1.0;
    s.freq.delta_f_max_hz = 0.8;
    CHECK(has_message(validate_scenario(s), "delta_f_ss exceeds delta_f_max"));
  }
  SUBCASE("demand beyond supply names the first short hour") {
    s.profile.demand_mw(5) = 1e6;
    s.profile.demand_mw(9) = 1e6;
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "profile.demand_mw");
    CHECK(v[0].message == "demand exceeds total available supply at hour 6");
  }
  SUBCASE("storage discharge counts toward supply") {
    auto small = testing_util::scenario_with(
        {testing_util::group(Technology::Ocgt, 1, "peaker")}, testing_util::flat_profile(2, 250));
    CHECK_FALSE(validate_scenario(small).empty());
    small.storage.push_back({"pump", 100, 0, 60, 60, 0.9, 0, 50});
    CHECK(validate_scenario(small).empty());
  }
  SUBCASE("bad names and duplicates") {
    s.groups[0].name = "two words";
    s.groups[3].name = "coal";
    const auto v = validate_scenario(s);
    CHECK(has_message(v, "letters, digits"));
    CHECK(has_message(v, "duplicate group/storage name 'coal'"));
  }
  SUBCASE("initial state consistency") {
    s.initial_state[1] = {21, 0};
    s.initial_state[0] = {4, 4 * 1800};
    const auto v = validate_scenario(s);
    CHECK(has_message(v, "outside [0, n_units]"));
    CHECK(has_message(v, "must-run group must start fully online"));
  }
  SUBCASE("storage and frequency ranges") {
    s.storage.push_back({"pump", 100, 20, 10, 10, 1.2, -1, 10});
    s.freq.t_efr_s = 12;
    s.start_day_of_year = 400;
    const auto v = validate_scenario(s);
    CHECK(has_message(v, "initial energy outside"));
    CHECK(has_message(v, "efficiency must lie in (0, 1]"));
    CHECK(has_message(v, "fr_max must be >= 0"));
    CHECK(has_message(v, "0 < t_efr < t_pfr"));
    CHECK(has_message(v, "start_day_of_year"));
  }
  SUBCASE("ragged series") {
    s.profile.wind_mw.conservativeResize(3);
    CHECK(has_message(validate_scenario(s), "series lengths differ"));
  }
}

TEST_CASE("damping demand follows the configured mode") {
  auto s = testing_util::scenario_with({}, testing_util::flat_profile(3, 0));
  s.profile.demand_mw = testing_util::vec({100, 200, 600});
  CHECK(s.damping_demand(0) == doctest::Approx(300));
  CHECK(s.damping_demand(2) == doctest::Approx(300));
  s.freq.damping_reference_mw = 32200;
  CHECK(s.damping_demand(1) == 32200);
  s.freq.damping_mode = DampingDemandMode::Hourly;
  CHECK(s.damping_demand(1) == 200);
}

TEST_CASE("slicing a profile") {
  auto p = testing_util::flat_profile(6, 0);
  p.demand_mw = testing_util::vec({1, 2, 3, 4, 5, 6});
  const auto s = p.slice(2, 3);
  CHECK(s.horizon() == 3);
  CHECK(s.demand_mw == testing_util::vec({3, 4, 5}));
}

TEST_CASE("config round trip with inline profiles") {
  auto s = adequate_baseline();
  s.name = "round_trip";
  s.start_day_of_year = 200;
  s.groups[2].marginal_cost = 21.125;
  s.initial_state[2] = {30, 7300};
  s.storage.push_back({"phs", 9000, 100, 1800, 1700, 0.866, 300, 4500});
  s.profile.demand_mw(3) = 31234.0625;
  s.freq.efr_mw = 150;
  s.freq.damping_reference_mw = 32200;
  s.freq.damping_mode = DampingDemandMode::Hourly;
  s.freq.qss_includes_efr = true;

  const auto text = serialize_scenario(s);
  const auto back = parse_scenario(text);
  require_same(s, back);
  CHECK(serialize_scenario(back) == text);
}

TEST_CASE("shipped scenarios load and reference their csv") {
  for (const char* name : {"baseline_week.yaml", "toy_week.yaml"}) {
    CAPTURE(name);
    const auto s = load_scenario(fs::path(FRUC_DATA_DIR) / name);
    CHECK(s.horizon() == 168);
    CHECK(validate_scenario(s).empty());
    REQUIRE(s.profile_path.has_value());
    const auto again = parse_scenario(serialize_scenario(s, true), fs::path(FRUC_DATA_DIR));
    require_same(s, again);
  }
}

TEST_CASE("config errors are reported as input errors") {
  CHECK_THROWS_AS(parse_scenario("groups: [1, 2"), InputError);
  CHECK_THROWS_AS(parse_scenario("- a\n- b\n"), InputError);
  CHECK_THROWS_AS(parse_scenario("profile: {demand_mw: [1]}\n"), InputError);
  const std::string missing_caps =
      "groups:\n  - {name: g, technology: ccgt, n_units: 2}\nprofile: {demand_mw: [1]}\n";
  CHECK(error_of([&] { parse_scenario(missing_caps); }).find("pfr_max_mw") != std::string::npos);
  const std::string bad_tech =
      "groups:\n  - {name: g, technology: wave, n_units: 2, pfr_max_mw: 1, sfr_max_mw: 1}\n"
      "profile: {demand_mw: [1]}\n";
  CHECK(error_of([&] { parse_scenario(bad_tech); }).find("unknown technology") !=
        std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent.yaml"), InputError);
}
