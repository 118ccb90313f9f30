#include <doctest.h>

#include "fruc/fr_requirements.hpp"
#include "fruc/scenario_runner.hpp"
#include "support/helpers.hpp"

#include <cmath>

using namespace fruc;
using testing_util::flat_profile;
using testing_util::group;

namespace {

// Undamped drop with EFR in full from t = 0 and PFR ramping over T_p,
// integrated in closed pieces and sampled on a 1 ms grid.
double sampled_undamped_nadir(double H, double P, double E, const FrequencyParams& f) {
  double best = 0.0;
  for (int i = 0; i <= 60000; ++i) {
    const double t = i * 1e-3;
    const double tr = std::min(t, f.t_pfr_s);
    double energy = (f.infeed_loss_mw - E) * t - P * tr * tr / (2.0 * f.t_pfr_s);
    if (t > f.t_pfr_s) energy -= P * (t - f.t_pfr_s);
    best = std::max(best, f.f_nominal_hz / (2.0 * H) * energy);
  }
  return best;
}

// One hour, CCGT-only system whose inertia is pinned to exactly 198 GVA s
// (56 units at 3000 MVA s each plus 30 GW of load at 1 s).
Scenario pinned_inertia_scenario() {
  auto s = testing_util::scenario_with({group(Technology::Ccgt, 60, "ccgt")},
                                       flat_profile(1, 30000, 10000));
  s.groups[0].pfr_max_mw = 60;
  s.groups[0].sfr_max_mw = 80;
  s.initial_state[0] = {56, 20000};
  return s;
}

double optimized_pfr_at_pinned_inertia(Scenario s, int n_segments) {
  auto built = build_model(s, true, n_segments);
  const int h = built.index.inertia[0];
  built.model.set_bounds(h, 198000, 198000);
  // P_req is otherwise free above its cuts; a small price makes it tight.
  built.model.set_objective_coef(built.index.pfr_req[0], 1e-3);
  const auto sol = testing_util::solve_exact(built.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  return sol[built.index.pfr_req[0]];
}

}  // namespace

TEST_CASE("nadir constant values") {
  FrequencyParams f;
  CHECK(nadir_constant(f, 0) == doctest::Approx(272250000.0));
  CHECK(nadir_constant(f, 100) == doctest::Approx(232562500.0));
  CHECK(nadir_constant(f, 1320) == 0.0);
  CHECK(nadir_constant(f, 1500) == 0.0);
  f.efr_mw = 100;
  CHECK(nadir_constant(f) == nadir_constant(f, 100));
}

TEST_CASE("nadir constant puts the undamped nadir exactly on the limit") {
  FrequencyParams f;
  for (double E : {0.0, 100.0, 400.0}) {
    for (double H : {90000.0, 125000.0, 150000.0, 198000.0}) {
      CAPTURE(E);
      CAPTURE(H);
      const double P = nadir_constant(f, E) / H;
      // The closed form assumes the nadir falls before T_p.
      if (P < f.infeed_loss_mw - E) continue;
      CHECK(sampled_undamped_nadir(H, P, E, f) == doctest::Approx(0.8).epsilon(1e-6));
      CHECK(sampled_undamped_nadir(H, 1.01 * P, E, f) < 0.8);
    }
  }
}

TEST_CASE("single chord over the baseline inertia range") {
  const double k = 272250000.0;
  const auto c = build_chord_segments(k, 100000, 340000, 1);
  REQUIRE(c.size() == 1);
  CHECK(c.envelope(100000) == doctest::Approx(2722.5));
  CHECK(c.envelope(340000) == doctest::Approx(800.735).epsilon(1e-5));
  CHECK(c.envelope(198000) == doctest::Approx(1937.9).epsilon(1e-4));
  CHECK(c.exact(198000) == doctest::Approx(1375.0));
}

TEST_CASE("chords are exact at grid points and conservative between them") {
  const double k = 272250000.0;
  for (int n : {1, 2, 5, 16}) {
    const auto c = build_chord_segments(k, 100000, 340000, n);
    CHECK(c.grid.size() == n + 1);
    for (Eigen::Index i = 0; i < c.grid.size(); ++i)
      CHECK(c.envelope(c.grid(i)) == doctest::Approx(k / c.grid(i)).epsilon(1e-12));
    // Grid is uniform in 1/H.
    const Eigen::VectorXd inv = c.grid.cwiseInverse();
    for (int i = 1; i < n; ++i)
      CHECK(inv(i) - inv(i + 1) == doctest::Approx(inv(0) - inv(1)).epsilon(1e-9));
  }
  const auto c16 = build_chord_segments(k, 100000, 340000, 16);
  double worst = 0.0;
  for (double H = 100000; H <= 340000; H += 1.0) {
    const double rel = c16.envelope(H) / (k / H) - 1.0;
    REQUIRE(rel >= -1e-12);
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 0.01);
  CHECK(worst > 0.0);
}

TEST_CASE("finer chord sets never loosen the envelope") {
  const double k = 232562500.0;
  for (int n = 1; n <= 32; n *= 2) {
    const auto coarse = build_chord_segments(k, 90000, 350000, n);
    const auto fine = build_chord_segments(k, 90000, 350000, 2 * n);
    for (double H = 90000; H <= 350000; H += 997.0)
      CHECK(fine.envelope(H) <= coarse.envelope(H) + 1e-9);
  }
}

TEST_CASE("chord set arguments") {
  CHECK_THROWS_AS(build_chord_segments(1.0, 0.0, 10.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_chord_segments(1.0, 5.0, 5.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_chord_segments(1.0, 1.0, 5.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_chord_segments(-1.0, 1.0, 5.0, 2), std::invalid_argument);
  const auto flat = build_chord_segments(0.0, 1.0, 5.0, 8);
  CHECK(flat.size() == 1);
  CHECK(flat.envelope(3.0) == 0.0);
}

TEST_CASE("inertia sums online capacity and load") {
  auto s = testing_util::scenario_with({group(Technology::Ccgt, 10, "ccgt")},
                                       flat_profile(1, 20000, 0, 0, 15000));
  s.groups[0].pfr_max_mw = 60;
  s.groups[0].sfr_max_mw = 80;
  const auto built = build_model(s, true, 4);
  const auto row = built.model.find_constraint("inertia_t1");
  REQUIRE(row.has_value());
  const auto& c = built.model.constraint(*row);
  CHECK(c.rhs == 20000);
  double coef = 0.0;
  for (const auto& term : c.terms)
    if (term.var == built.index.online[0][0]) coef = term.coef;
  CHECK(c.rhs - 10 * coef == 50000);

  auto none = s;
  none.profile.demand_mw.setZero();
  none.groups[0].inertia_constant_s = 0;
  CHECK(inertia_range(none).max == 0.0);
}

TEST_CASE("baseline fleet at peak demand is close to the published maximum inertia") {
  const auto s = load_scenario(std::filesystem::path(FRUC_DATA_DIR) / "baseline_week.yaml");
  CHECK(inertia_range(s).max == doctest::Approx(340000).epsilon(0.05));
}

TEST_CASE("tight requirements at fixed inertia") {
  Scenario s = pinned_inertia_scenario();
  s.freq.damping_reference_mw = 32200;
  auto seg = build_chord_segments(nadir_constant(s.freq), 70000, 400000, 64);
  auto r = tight_requirement(s, seg, 0, 198000);
  CHECK(r.pfr == doctest::Approx(1375.0).epsilon(5e-4));
  CHECK(r.pfr >= 1375.0);
  CHECK(r.binding == PfrBinding::NadirChord);
  CHECK(r.sfr == doctest::Approx(1159.0));

  s.freq.efr_mw = 100;
  seg = build_chord_segments(nadir_constant(s.freq), 70000, 400000, 64);
  r = tight_requirement(s, seg, 0, 125000);
  CHECK(r.pfr == doctest::Approx(1860.5).epsilon(5e-4));
  CHECK(r.sfr == doctest::Approx(1159.0));

  // Far above the range the damping floor takes over.
  r = tight_requirement(s, seg, 0, 400000);
  CHECK(r.binding == PfrBinding::AdequacyFloor);
  CHECK(r.pfr == doctest::Approx(1320 - 100 - 322 * 0.8));
}

TEST_CASE("requirement floors") {
  auto s = pinned_inertia_scenario();
  s.freq.damping_reference_mw = 32200;
  CHECK(sfr_floor(s, 0) == doctest::Approx(1159.0));
  CHECK(pfr_floor(s, 0) == doctest::Approx(1320 - 257.6));

  s.freq.efr_mw = 200;
  CHECK(sfr_floor(s, 0) == doctest::Approx(1159.0));
  s.freq.qss_includes_efr = true;
  s.freq.efr_mw = 100;
  CHECK(sfr_floor(s, 0) == doctest::Approx(1059.0));

  s.freq.damping_per_hz = 0.0;
  s.freq.efr_mw = 0.0;
  CHECK(pfr_floor(s, 0) == 1320.0);
  CHECK(sfr_floor(s, 0) == 1320.0);
}

TEST_CASE("optimized requirement with inertia pinned at 198 GVA s") {
  const double p = optimized_pfr_at_pinned_inertia(pinned_inertia_scenario(), 64);
  CHECK(p == doctest::Approx(1375.0).epsilon(1e-3));
  CHECK(p * 198000 >= 272250000.0 - 1e-3);
}

TEST_CASE("thermal and storage provision limits") {
  // Two hours: the store charges 100 MW in the first and returns it in the
  // second, so the second hour has 100 MW of discharge in use.
  auto s = testing_util::scenario_with({group(Technology::Ccgt, 1, "ccgt")},
                                       flat_profile(2, 300));
  s.profile.demand_mw(1) = 500;
  s.groups[0].pfr_max_mw = 100;
  s.groups[0].sfr_max_mw = 100;
  s.initial_state[0] = {1, 400};
  s.storage.push_back({"store", 1000, 0, 300, 300, 1.0, 250, 500});
  s.freq.infeed_loss_mw = 1;
  auto built = build_model(s, true, 2);
  const auto& ix = built.index;
  auto& m = built.model;
  for (int t = 0; t < 2; ++t) {
    m.set_bounds(ix.online[t][0], 1, 1);
    m.set_bounds(ix.p_gen[t][0], 400, 400);
  }
  m.set_bounds(ix.charge[0][0], 100, 100);
  m.set_bounds(ix.discharge[1][0], 100, 100);

  SUBCASE("governor slope binds below the response cap") {
    m.set_objective_coef(ix.pfr_thermal[1][0], -1.0);
    const auto sol = testing_util::solve_exact(m);
    REQUIRE(sol.has_values());
    CHECK(sol[ix.pfr_thermal[1][0]] == doctest::Approx(40.0));
  }
  SUBCASE("storage response shares the discharge headroom") {
    m.set_objective_coef(ix.pfr_storage[1][0], -1.0);
    m.set_objective_coef(ix.sfr_storage[1][0], -1.0);
    const auto sol = testing_util::solve_exact(m);
    REQUIRE(sol.has_values());
    CHECK(sol[ix.pfr_storage[1][0]] + sol[ix.sfr_storage[1][0]] == doctest::Approx(200.0));
  }
}

TEST_CASE("nuclear holds no primary response") {
  auto s = testing_util::scenario_with(
      {group(Technology::Nuclear, 1, "nuclear"), group(Technology::Ocgt, 30, "ocgt")},
      flat_profile(1, 1800));
  s.groups[1].pfr_max_mw = 60;
  s.groups[1].sfr_max_mw = 100;
  s.freq.infeed_loss_mw = 300;
  auto built = build_model(s, true, 4);
  built.model.set_objective_coef(built.index.pfr_thermal[0][0], -1.0);
  const auto sol = testing_util::solve_exact(built.model);
  REQUIRE(sol.has_values());
  CHECK(sol[built.index.pfr_thermal[0][0]] == 0.0);
}

TEST_CASE("requirement that headroom cannot cover is infeasible") {
  auto s = testing_util::scenario_with({group(Technology::Ocgt, 2, "ocgt")},
                                       flat_profile(2, 200));
  s.groups[0].pfr_max_mw = 60;
  s.groups[0].sfr_max_mw = 100;
  s.freq.damping_per_hz = 0.0;
  const auto built = build_model(s, true, 4);
  CHECK(testing_util::solve_exact(built.model).status == SolveStatus::Infeasible);
}

TEST_CASE("nadir cuts refuse chord sets that do not cover the schedulable range") {
  auto s = pinned_inertia_scenario();
  const auto range = inertia_range(s);
  const double k = nadir_constant(s.freq);
  MipModel m;
  const auto idx = register_uc_variables(m, s, true);
  CHECK_THROWS_AS(add_nadir_constraints(m, idx, s, build_chord_segments(k, 50000, range.max * 0.9, 4)),
                  ModelError);
  CHECK_THROWS_AS(add_nadir_constraints(m, idx, s, build_chord_segments(k, 150000, range.max, 4)),
                  ModelError);
  CHECK_THROWS_AS(
      add_nadir_constraints(m, idx, s, build_chord_segments(0.5 * k, 50000, range.max, 4)),
      ModelError);
  CHECK_NOTHROW(add_nadir_constraints(m, idx, s, default_chord_segments(s, 4)));
  CHECK(m.find_constraint("nadir_t1_s3").has_value());
  CHECK(m.find_constraint("hmin_t1").has_value());
}

TEST_CASE("the nadir limit holds at every hour of an optimal schedule") {
  auto s = testing_util::scenario_with(
      {group(Technology::Nuclear, 2, "nuclear"), group(Technology::Ccgt, 40, "ccgt"),
       group(Technology::Ocgt, 10, "ocgt")},
      flat_profile(6, 14000, 2000));
  for (int t = 0; t < 6; ++t) s.profile.demand_mw(t) += 1500 * t;
  s.groups[1].pfr_max_mw = 60;
  s.groups[1].sfr_max_mw = 80;
  s.groups[2].pfr_max_mw = 60;
  s.groups[2].sfr_max_mw = 100;
  s.initial_state[1] = {18, 8000};
  s.freq.damping_reference_mw = 16000;
  for (double efr : {0.0, 100.0}) {
    s.freq.efr_mw = efr;
    const auto built = build_model(s, true, 8);
    const auto sol = testing_util::solve_exact(built.model);
    REQUIRE(sol.has_values());
    const double k = nadir_constant(s.freq);
    for (int t = 0; t < 6; ++t) {
      const double H = sol[built.index.inertia[t]];
      CHECK(H * sol[built.index.pfr_req[t]] >= k - 1e-3 * H);
      CHECK(sol[built.index.sfr_req[t]] >= sfr_floor(s, t) - 1e-6);
    }
    CHECK(check_feasibility(built.model, sol.values).empty());
  }
}

TEST_CASE("per-MW offset falls with inertia on the closed form") {
  FrequencyParams f;
  const auto offset = [&](double E, double H) {
    return (nadir_constant(f, E) - nadir_constant(f, E + 1.0)) / H;
  };
  double prev = std::numeric_limits<double>::infinity();
  for (double H = 100000; H <= 350000; H += 25000) {
    const double o = offset(0.0, H);
    CHECK(o < prev);
    prev = o;
  }
  // Derivative 2 f_o T_p (P - E) / (4 df H) against a central difference.
  const double H = 150000;
  const double analytic = 2 * 50 * 10 * 1220.0 / (4 * 0.8 * H);
  const double numeric = (nadir_constant(f, 99) - nadir_constant(f, 101)) / (2 * H);
  CHECK(numeric == doctest::Approx(analytic).epsilon(1e-9));
}
