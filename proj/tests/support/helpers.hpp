#pragma once

#include "fruc/scenario_runner.hpp"

#include <initializer_list>
#include <vector>

namespace testing_util {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline fruc::TimeSeriesProfile flat_profile(int hours, double demand, double wind = 0.0,
                                            double solar = 0.0, double imports = 0.0) {
  fruc::TimeSeriesProfile p;
  p.demand_mw = Eigen::VectorXd::Constant(hours, demand);
  p.wind_mw = Eigen::VectorXd::Constant(hours, wind);
  p.solar_mw = Eigen::VectorXd::Constant(hours, solar);
  p.interconnector_mw = Eigen::VectorXd::Constant(hours, imports);
  return p;
}

inline fruc::Scenario scenario_with(std::vector<fruc::GeneratorGroup> groups,
                                    fruc::TimeSeriesProfile profile) {
  fruc::Scenario s;
  s.name = "test";
  s.groups = std::move(groups);
  s.profile = std::move(profile);
  for (const auto& g : s.groups) {
    fruc::InitialGroupState init;
    if (g.must_run()) {
      init.units_online = g.n_units;
      init.output_mw = g.n_units * g.unit_capacity_mw;
    }
    s.initial_state.push_back(init);
  }
  return s;
}

inline fruc::GeneratorGroup group(fruc::Technology tech, int n, const std::string& name) {
  auto g = fruc::table_one_group(tech, n);
  g.name = name;
  return g;
}

inline fruc::Solution solve_exact(const fruc::MipModel& m) {
  fruc::HighsBackend backend;
  fruc::SolveOptions o;
  o.gap_tolerance = 1e-9;
  return fruc::solve(m, backend, o);
}

}  // namespace testing_util
