#include "fruc/uc_formulation.hpp"

#include <algorithm>

namespace fruc {

namespace {

std::string tag(const char* prefix, int t) {
  return std::string(prefix) + "_t" + std::to_string(t + 1);
}

std::string tag(const char* prefix, int t, const std::string& unit) {
  return tag(prefix, t) + "_" + unit;
}

UcVariableIndex::Grid make_grid(int periods, int width) {
  return UcVariableIndex::Grid(periods, std::vector<int>(width, -1));
}

}  // namespace

UcVariableIndex register_uc_variables(MipModel& m, const Scenario& s,
                                      bool include_fr) {
  UcVariableIndex idx;
  idx.periods = s.horizon();
  idx.groups = static_cast<int>(s.groups.size());
  idx.stores = static_cast<int>(s.storage.size());
  idx.has_fr = include_fr;
  const int T = idx.periods, G = idx.groups, S = idx.stores;

  idx.p_gen = make_grid(T, G);
  idx.online = make_grid(T, G);
  idx.start_ups = make_grid(T, G);
  idx.shut_downs = make_grid(T, G);
  idx.charge = make_grid(T, S);
  idx.discharge = make_grid(T, S);
  idx.energy = make_grid(T, S);
  idx.curtailment.assign(T, -1);
  idx.pfr_req.assign(T, -1);
  idx.sfr_req.assign(T, -1);

  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      const auto& grp = s.groups[g];
      const double n = grp.n_units;
      idx.p_gen[t][g] =
          m.add_continuous(tag("pgen", t, grp.name), 0.0, n * grp.unit_capacity_mw);
      // Must-run groups are pinned fully online.
      idx.online[t][g] = m.add_integer(tag("u", t, grp.name),
                                       grp.must_run() ? n : 0.0, n);
      idx.start_ups[t][g] = m.add_integer(tag("son", t, grp.name), 0.0, n);
      idx.shut_downs[t][g] = m.add_integer(tag("soff", t, grp.name), 0.0, n);
    }
    for (int k = 0; k < S; ++k) {
      const auto& st = s.storage[k];
      idx.charge[t][k] = m.add_continuous(tag("pc", t, st.name), 0.0, st.p_charge_max_mw);
      idx.discharge[t][k] =
          m.add_continuous(tag("pd", t, st.name), 0.0, st.p_discharge_max_mw);
      idx.energy[t][k] =
          m.add_continuous(tag("e", t, st.name), st.e_min_mwh, st.e_max_mwh);
    }
    const double renewables = s.profile.wind_mw(t) + s.profile.solar_mw(t);
    idx.curtailment[t] = m.add_continuous(tag("curt", t), 0.0, renewables);
    const double req_upper = include_fr ? kInf : 0.0;
    idx.pfr_req[t] = m.add_continuous(tag("preq", t), 0.0, req_upper);
    idx.sfr_req[t] = m.add_continuous(tag("sreq", t), 0.0, req_upper);
  }

  if (include_fr) {
    idx.pfr_thermal = make_grid(T, G);
    idx.sfr_thermal = make_grid(T, G);
    idx.pfr_storage = make_grid(T, S);
    idx.sfr_storage = make_grid(T, S);
    idx.inertia.assign(T, -1);
    for (int t = 0; t < T; ++t) {
      for (int g = 0; g < G; ++g) {
        const auto& grp = s.groups[g];
        // Must-run plant has no governor response.
        const double ub = grp.must_run() ? 0.0 : kInf;
        idx.pfr_thermal[t][g] = m.add_continuous(tag("pth", t, grp.name), 0.0, ub);
        idx.sfr_thermal[t][g] = m.add_continuous(tag("sth", t, grp.name), 0.0, ub);
      }
      for (int k = 0; k < S; ++k) {
        const auto& st = s.storage[k];
        idx.pfr_storage[t][k] = m.add_continuous(tag("pst", t, st.name));
        idx.sfr_storage[t][k] = m.add_continuous(tag("sst", t, st.name));
      }
      idx.inertia[t] = m.add_continuous(tag("h", t));
    }
  }
  return idx;
}

void add_objective(MipModel& m, const UcVariableIndex& idx, const Scenario& s) {
  LinearExpr obj;
  for (int t = 0; t < idx.periods; ++t) {
    for (int g = 0; g < idx.groups; ++g) {
      const auto& grp = s.groups[g];
      obj.add(idx.start_ups[t][g], grp.startup_cost);
      obj.add(idx.online[t][g], grp.no_load_cost);
      obj.add(idx.p_gen[t][g], grp.marginal_cost);
    }
  }
  m.add_objective(obj);
}

void add_power_balance(MipModel& m, const UcVariableIndex& idx, const Scenario& s) {
  const auto& p = s.profile;
  for (int t = 0; t < idx.periods; ++t) {
    LinearExpr lhs;
    for (int g = 0; g < idx.groups; ++g) lhs.add(idx.p_gen[t][g], 1.0);
    for (int k = 0; k < idx.stores; ++k) {
      lhs.add(idx.discharge[t][k], 1.0);
      lhs.add(idx.charge[t][k], -1.0);
    }
    lhs.add(idx.curtailment[t], -1.0);
    lhs.constant = p.interconnector_mw(t) + p.wind_mw(t) + p.solar_mw(t);
    m.add_constraint(tag("balance", t), lhs, Sense::Equal, p.demand_mw(t));
  }
}

void add_commitment_constraints(MipModel& m, const UcVariableIndex& idx,
                                const Scenario& s) {
  for (int g = 0; g < idx.groups; ++g) {
    const auto& grp = s.groups[g];
    const double initial_online = s.initial_state.at(g).units_online;
    for (int t = 0; t < idx.periods; ++t) {
      const int u = idx.online[t][g];
      const int p = idx.p_gen[t][g];
      m.add_constraint(tag("msg", t, grp.name), {{p, 1.0}, {u, -grp.msg_mw}},
                       Sense::GreaterEqual, 0.0);
      m.add_constraint(tag("cap", t, grp.name),
                       {{p, 1.0}, {u, -grp.unit_capacity_mw}}, Sense::LessEqual, 0.0);

      // Start-ups and shut-downs bound the change in online count.
      LinearExpr on{{idx.start_ups[t][g], 1.0}, {u, -1.0}};
      LinearExpr off{{idx.shut_downs[t][g], 1.0}, {u, 1.0}};
      if (t > 0) {
        on.add(idx.online[t - 1][g], 1.0);
        off.add(idx.online[t - 1][g], -1.0);
      } else {
        on.constant = initial_online;
        off.constant = -initial_online;
      }
      m.add_constraint(tag("startup", t, grp.name), on, Sense::GreaterEqual, 0.0);
      m.add_constraint(tag("shutdown", t, grp.name), off, Sense::GreaterEqual, 0.0);

      // Minimum up time: units started in the window are still online.
      const int up_first = std::max(0, t - grp.startup_time_h + 1);
      if (up_first <= t - 1) {
        LinearExpr e{{u, 1.0}};
        for (int tau = up_first; tau <= t - 1; ++tau)
          e.add(idx.start_ups[tau][g], -1.0);
        m.add_constraint(tag("minup", t, grp.name), e, Sense::GreaterEqual, 0.0);
      }
      // Minimum down time: units shut in the window stay offline.
      const int down_first = std::max(0, t - grp.shutdown_time_h + 1);
      if (down_first <= t - 1) {
        LinearExpr e{{u, 1.0}};
        for (int tau = down_first; tau <= t - 1; ++tau)
          e.add(idx.shut_downs[tau][g], 1.0);
        m.add_constraint(tag("mindown", t, grp.name), e, Sense::LessEqual,
                         grp.n_units);
      }
    }
  }
}

void add_ramp_constraints(MipModel& m, const UcVariableIndex& idx, const Scenario& s) {
  for (int g = 0; g < idx.groups; ++g) {
    const auto& grp = s.groups[g];
    const double initial_output = s.initial_state.at(g).output_mw;
    for (int t = 0; t < idx.periods; ++t) {
      const int p = idx.p_gen[t][g];
      const int u = idx.online[t][g];
      LinearExpr up{{p, 1.0}, {u, -grp.ramp_up_mw_per_h}};
      LinearExpr down{{p, -1.0}, {u, -grp.ramp_down_mw_per_h}};
      if (t > 0) {
        up.add(idx.p_gen[t - 1][g], -1.0);
        down.add(idx.p_gen[t - 1][g], 1.0);
      } else {
        up.constant = -initial_output;
        down.constant = initial_output;
      }
      m.add_constraint(tag("rampup", t, grp.name), up, Sense::LessEqual, 0.0);
      m.add_constraint(tag("rampdn", t, grp.name), down, Sense::LessEqual, 0.0);
    }
  }
}

void add_storage_constraints(MipModel& m, const UcVariableIndex& idx,
                             const Scenario& s) {
  for (int k = 0; k < idx.stores; ++k) {
    const auto& st = s.storage[k];
    for (int t = 0; t < idx.periods; ++t) {
      LinearExpr e{{idx.energy[t][k], 1.0},
                   {idx.charge[t][k], -st.efficiency},
                   {idx.discharge[t][k], 1.0 / st.efficiency}};
      if (t > 0)
        e.add(idx.energy[t - 1][k], -1.0);
      else
        e.constant = -st.e_initial_mwh;
      m.add_constraint(tag("soc", t, st.name), e, Sense::Equal, 0.0);
    }
    if (idx.periods > 0)
      m.add_constraint("soc_final_" + st.name,
                       {{idx.energy[idx.periods - 1][k], 1.0}}, Sense::Equal,
                       st.e_initial_mwh);
  }
}

CostBreakdown recompute_cost(const UcVariableIndex& idx, const Scenario& s,
                             const Eigen::VectorXd& x) {
  CostBreakdown c;
  for (int t = 0; t < idx.periods; ++t) {
    for (int g = 0; g < idx.groups; ++g) {
      const auto& grp = s.groups[g];
      c.startup += grp.startup_cost * x(idx.start_ups[t][g]);
      c.no_load += grp.no_load_cost * x(idx.online[t][g]);
      c.marginal += grp.marginal_cost * x(idx.p_gen[t][g]);
    }
  }
  return c;
}

}  // namespace fruc
