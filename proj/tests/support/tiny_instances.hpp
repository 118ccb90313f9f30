// Random tiny unit-commitment instances (no frequency response) for the
// enumeration oracle.
#pragma once

#include "fruc/system_model.hpp"

#include <random>
#include <string>

namespace oracle {

inline fruc::Scenario random_tiny_scenario(unsigned seed) {
  std::mt19937 rng(seed);
  const auto uni = [&rng](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  const auto pick = [&rng](int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
  };

  fruc::Scenario s;
  s.name = "tiny" + std::to_string(seed);
  const int G = pick(1, 2);
  const fruc::Technology techs[] = {fruc::Technology::Coal, fruc::Technology::Ccgt,
                                    fruc::Technology::Ocgt};
  double capacity = 0.0;
  for (int g = 0; g < G; ++g) {
    auto grp = fruc::table_one_group(techs[pick(0, 2)], pick(1, 2));
    grp.name = "g" + std::to_string(g);
    grp.unit_capacity_mw = uni(80.0, 250.0);
    grp.msg_mw = uni(0.0, 0.5) * grp.unit_capacity_mw;
    grp.marginal_cost = uni(5.0, 60.0);
    grp.no_load_cost = uni(0.0, 800.0);
    grp.startup_cost = uni(0.0, 3000.0);
    grp.startup_time_h = pick(0, 3);
    grp.shutdown_time_h = pick(0, 3);
    grp.ramp_up_mw_per_h = uni(0.4, 1.0) * grp.unit_capacity_mw;
    grp.ramp_down_mw_per_h = uni(0.4, 1.0) * grp.unit_capacity_mw;
    capacity += grp.n_units * grp.unit_capacity_mw;

    fruc::InitialGroupState init;
    init.units_online = pick(0, grp.n_units);
    init.output_mw = init.units_online *
                     uni(grp.msg_mw, 0.5 * (grp.msg_mw + grp.unit_capacity_mw));
    s.groups.push_back(grp);
    s.initial_state.push_back(init);
  }
  if (pick(0, 1) == 1) {
    fruc::StorageUnit st;
    st.name = "store";
    st.e_max_mwh = uni(50.0, 200.0);
    st.e_min_mwh = 0.0;
    st.p_charge_max_mw = uni(20.0, 80.0);
    st.p_discharge_max_mw = uni(20.0, 80.0);
    st.efficiency = uni(0.8, 0.95);
    st.e_initial_mwh = 0.5 * st.e_max_mwh;
    s.storage.push_back(st);
  }
  const int T = 3;
  s.profile.demand_mw.resize(T);
  s.profile.wind_mw.resize(T);
  s.profile.solar_mw.resize(T);
  s.profile.interconnector_mw.resize(T);
  for (int t = 0; t < T; ++t) {
    s.profile.demand_mw(t) = uni(0.3, 0.9) * capacity;
    s.profile.wind_mw(t) = uni(0.0, 0.3) * capacity;
    s.profile.solar_mw(t) = uni(0.0, 0.05) * capacity;
    s.profile.interconnector_mw(t) = uni(-0.05, 0.05) * capacity;
  }
  return s;
}

}  // namespace oracle
