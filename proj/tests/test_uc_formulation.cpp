#include <doctest.h>

#include "helpers.hpp"
#include "tiny_instances.hpp"
#include "uc_oracle.hpp"

using namespace fruc;
using namespace testing_util;

namespace {

Eigen::VectorXd point(const MipModel& m) { return Eigen::VectorXd::Zero(m.num_variables()); }

double row_slack(const MipModel& m, const std::string& name, const Eigen::VectorXd& x) {
  const auto& c = m.constraint(*m.find_constraint(name));
  double lhs = 0.0;
  for (const auto& t : c.terms) lhs += t.coef * x(t.var);
  return c.sense == Sense::LessEqual ? c.rhs - lhs : lhs - c.rhs;
}

}  // namespace

TEST_CASE("objective prices start-ups, no-load hours and energy") {
  SUBCASE("ccgt") {
    auto s = scenario_with({group(Technology::Ccgt, 1, "ccgt")}, flat_profile(1, 300));
    MipModel m;
    const auto idx = register_uc_variables(m, s, false);
    add_objective(m, idx, s);
    Eigen::VectorXd x = point(m);
    x(idx.start_ups[0][0]) = 1;
    x(idx.online[0][0]) = 1;
    x(idx.p_gen[0][0]) = 300;
    CHECK(m.objective().dot(x) == doctest::Approx(12564 + 2476 + 18.93 * 300));
    CHECK(m.objective().dot(x) == doctest::Approx(20719));
    CHECK(m.objective().dot(point(m)) == 0.0);
  }
  SUBCASE("ocgt") {
    auto s = scenario_with({group(Technology::Ocgt, 1, "ocgt")}, flat_profile(1, 200));
    MipModel m;
    const auto idx = register_uc_variables(m, s, false);
    add_objective(m, idx, s);
    Eigen::VectorXd x = point(m);
    x(idx.start_ups[0][0]) = 1;
    x(idx.online[0][0]) = 1;
    x(idx.p_gen[0][0]) = 200;
    CHECK(m.objective().dot(x) == doctest::Approx(12717));
  }
}

TEST_CASE("variable count follows the index layout") {
  auto s = scenario_with({group(Technology::Ccgt, 3, "ccgt"), group(Technology::Coal, 2, "coal")},
                         flat_profile(5, 600));
  s.storage.push_back({"phs", 100, 0, 50, 50, 0.9, 20, 50});
  for (bool fr : {false, true}) {
    MipModel m;
    const auto idx = register_uc_variables(m, s, fr);
    CHECK(m.num_variables() == idx.expected_variable_count());
    CHECK(m.num_variables() == 5 * (4 * 2 + 3 * 1 + 3) + (fr ? 5 * (2 * 2 + 2 * 1 + 1) : 0));
  }
}

TEST_CASE("power balance") {
  auto ocgt = group(Technology::Ocgt, 3, "ocgt");

  SUBCASE("surplus wind is curtailed") {
    auto s = scenario_with({ocgt}, flat_profile(1, 50, 100));
    const auto b = build_model(s, false, 4);
    const auto sol = solve_exact(b.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol[b.index.curtailment[0]] == doctest::Approx(50));
    CHECK(sol[b.index.p_gen[0][0]] == doctest::Approx(0));
  }
  SUBCASE("thermal covers the residual") {
    auto s = scenario_with({ocgt}, flat_profile(1, 500, 100));
    const auto b = build_model(s, false, 4);
    const auto sol = solve_exact(b.model);
    CHECK(sol[b.index.p_gen[0][0]] == doctest::Approx(400));
    CHECK(sol[b.index.curtailment[0]] == doctest::Approx(0));
  }
  SUBCASE("exports add to the load") {
    auto s = scenario_with({ocgt}, flat_profile(1, 300, 0, 0, -200));
    const auto b = build_model(s, false, 4);
    const auto sol = solve_exact(b.model);
    CHECK(sol[b.index.p_gen[0][0]] == doctest::Approx(500));
  }
}

TEST_CASE("commitment rules") {
  SUBCASE("nuclear is pinned online") {
    auto s = scenario_with({group(Technology::Nuclear, 1, "nuc")}, flat_profile(3, 1800));
    const auto b = build_model(s, false, 4);
    for (int t = 0; t < 3; ++t) {
      const auto& v = b.model.variable(b.index.online[t][0]);
      CHECK(v.lower == 1.0);
      CHECK(v.upper == 1.0);
    }
  }
  SUBCASE("start-ups take the minimal count") {
    auto ccgt = group(Technology::Ccgt, 4, "ccgt");
    ccgt.ramp_up_mw_per_h = 500;
    auto s = scenario_with({ccgt}, flat_profile(2, 0));
    s.profile.demand_mw << 1000, 1500;
    s.initial_state[0] = {2, 1000};
    const auto b = build_model(s, false, 4);
    const auto sol = solve_exact(b.model);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol[b.index.online[0][0]] == doctest::Approx(2));
    CHECK(sol[b.index.online[1][0]] == doctest::Approx(3));
    CHECK(sol[b.index.start_ups[1][0]] == doctest::Approx(1));
    // Shut-downs carry no price, so only their minimal value is meaningful.
    Eigen::VectorXd x = sol.values;
    x(b.index.shut_downs[0][0]) = 0;
    x(b.index.shut_downs[1][0]) = 0;
    CHECK(check_feasibility(b.model, x, 1e-9).empty());
  }
  SUBCASE("coal minimum up time keeps recent starts online") {
    auto coal = group(Technology::Coal, 3, "coal");
    auto s = scenario_with({coal}, flat_profile(4, 500));
    MipModel m;
    const auto idx = register_uc_variables(m, s, false);
    add_commitment_constraints(m, idx, s);
    Eigen::VectorXd x = point(m);
    x(idx.start_ups[1][0]) = 1;
    x(idx.start_ups[2][0]) = 1;
    x(idx.online[3][0]) = 2;
    CHECK(row_slack(m, "minup_t4_coal", x) == doctest::Approx(0));
    x(idx.online[3][0]) = 1;
    CHECK(row_slack(m, "minup_t4_coal", x) < 0);
  }
}

TEST_CASE("ramp limits scale with the online count") {
  auto ccgt = group(Technology::Ccgt, 2, "ccgt");
  auto s = scenario_with({ccgt}, flat_profile(2, 400));
  MipModel m;
  const auto idx = register_uc_variables(m, s, false);
  add_ramp_constraints(m, idx, s);
  Eigen::VectorXd x = point(m);
  x(idx.online[1][0]) = 1;
  x(idx.p_gen[0][0]) = 200;
  x(idx.p_gen[1][0]) = 560;
  CHECK(row_slack(m, "rampup_t2_ccgt", x) == doctest::Approx(0));
  x(idx.p_gen[1][0]) = 561;
  CHECK(row_slack(m, "rampup_t2_ccgt", x) < 0);
  x(idx.online[1][0]) = 2;
  x(idx.p_gen[1][0]) = 920;
  CHECK(row_slack(m, "rampup_t2_ccgt", x) == doctest::Approx(0));
}

TEST_CASE("a two-unit group ramps like two one-unit groups") {
  // Demand steps faster than one unit can follow.
  auto one = group(Technology::Ccgt, 2, "pair");
  auto a = group(Technology::Ccgt, 1, "a");
  auto b = group(Technology::Ccgt, 1, "b");
  auto prof = flat_profile(3, 0);
  prof.demand_mw << 400, 1000, 600;
  auto s2 = scenario_with({one}, prof);
  s2.initial_state[0] = {2, 400};
  auto s11 = scenario_with({a, b}, prof);
  s11.initial_state[0] = {1, 200};
  s11.initial_state[1] = {1, 200};
  const auto m2 = build_model(s2, false, 4);
  const auto m11 = build_model(s11, false, 4);
  const auto r2 = solve_exact(m2.model);
  const auto r11 = solve_exact(m11.model);
  REQUIRE(r2.status == SolveStatus::Optimal);
  REQUIRE(r11.status == SolveStatus::Optimal);
  CHECK(r2.objective == doctest::Approx(r11.objective).epsilon(1e-9));
}

TEST_CASE("storage energy balance") {
  auto s = scenario_with({group(Technology::Ocgt, 2, "ocgt")}, flat_profile(2, 100));
  s.storage.push_back({"phs", 1000, 0, 200, 200, 0.866, 0, 500});
  MipModel m;
  const auto idx = register_uc_variables(m, s, false);
  add_storage_constraints(m, idx, s);
  Eigen::VectorXd x = point(m);
  x(idx.charge[0][0]) = 100;
  x(idx.energy[0][0]) = 586.6;
  CHECK(std::abs(row_slack(m, "soc_t1_phs", x)) < 1e-9);
  x(idx.discharge[1][0]) = 86.6;
  x(idx.energy[1][0]) = 486.6;
  CHECK(std::abs(row_slack(m, "soc_t2_phs", x)) < 1e-9);
}

TEST_CASE("storage returns to its initial energy over the horizon") {
  auto ocgt = group(Technology::Ocgt, 3, "ocgt");
  auto prof = flat_profile(4, 0);
  prof.demand_mw << 100, 500, 100, 500;
  prof.wind_mw << 300, 0, 300, 0;
  auto s = scenario_with({ocgt}, prof);
  s.storage.push_back({"phs", 400, 0, 150, 150, 0.866, 0, 100});
  const auto b = build_model(s, false, 4);
  const auto sol = solve_exact(b.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  double net = 0.0;
  for (int t = 0; t < 4; ++t)
    net += 0.866 * sol[b.index.charge[t][0]] - sol[b.index.discharge[t][0]] / 0.866;
  CHECK(net == doctest::Approx(0).epsilon(1e-7));
  CHECK(sol[b.index.energy[3][0]] == doctest::Approx(100));
}

TEST_CASE("tiny instances agree with exhaustive enumeration") {
  int feasible = 0;
  for (unsigned seed = 1; seed <= 12; ++seed) {
    CAPTURE(seed);
    const Scenario s = oracle::random_tiny_scenario(seed);
    const auto ref = oracle::solve_uc_by_enumeration(s);
    const auto b = build_model(s, false, 4);
    const auto sol = solve_exact(b.model);
    if (!ref.feasible) {
      CHECK(sol.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(ref.objective).epsilon(1e-4));
    CHECK(recompute_cost(b.index, s, sol.values).total() ==
          doctest::Approx(sol.objective).epsilon(1e-9));
  }
  CHECK(feasible >= 6);
}

TEST_CASE("raising demand never lowers the optimum") {
  for (unsigned seed = 100; seed < 110; ++seed) {
    CAPTURE(seed);
    Scenario s = oracle::random_tiny_scenario(seed);
    const auto base = solve_exact(build_model(s, false, 4).model);
    if (!base.has_values()) continue;
    s.profile.demand_mw(1) += 10.0;
    const auto more = solve_exact(build_model(s, false, 4).model);
    if (!more.has_values()) continue;  // higher demand may become unservable
    CHECK(more.objective >= base.objective - 1e-6 * std::abs(base.objective));
  }
}

TEST_CASE("start-up and shut-down never coincide when starts cost money") {
  auto ccgt = group(Technology::Ccgt, 2, "ccgt");
  auto prof = flat_profile(6, 0);
  prof.demand_mw << 300, 700, 300, 800, 250, 600;
  auto s = scenario_with({ccgt, group(Technology::Ocgt, 2, "ocgt")}, prof);
  s.groups[0].startup_time_h = 0;
  s.groups[0].shutdown_time_h = 0;
  const auto b = build_model(s, false, 4);
  const auto sol = solve_exact(b.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  // Only the CCGT group has a start-up price.
  for (int t = 0; t < 6; ++t)
    CHECK(sol[b.index.start_ups[t][0]] * sol[b.index.shut_downs[t][0]] == 0.0);
}

TEST_CASE("free renewables are curtailed only by the surplus") {
  auto ocgt = group(Technology::Ocgt, 2, "ocgt");
  auto prof = flat_profile(3, 0);
  prof.demand_mw << 200, 200, 200;
  prof.wind_mw << 350, 150, 200;
  auto s = scenario_with({ocgt}, prof);
  const auto b = build_model(s, false, 4);
  const auto sol = solve_exact(b.model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol[b.index.curtailment[0]] == doctest::Approx(150));
  CHECK(sol[b.index.curtailment[1]] == doctest::Approx(0));
  CHECK(sol[b.index.curtailment[2]] == doctest::Approx(0));
  CHECK(sol[b.index.p_gen[1][0]] == doctest::Approx(50));
}
