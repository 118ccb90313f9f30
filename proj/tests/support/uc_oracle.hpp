// Brute-force reference for tiny unit-commitment instances without frequency
// response. Every commitment sequence is enumerated; start-up and shut-down
// counts take their smallest admissible values (larger ones only cost more
// or tighten the up/down-time rows), and the dispatch for a fixed sequence
// is solved with the dense simplex.
#pragma once

#include "dense_lp.hpp"
#include "fruc/system_model.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace oracle {

struct UcOracleResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> online;  // [t][g]
  int sequences_checked = 0;
};

inline bool updown_ok(const fruc::GeneratorGroup& g, int u0, const std::vector<int>& u) {
  const int T = static_cast<int>(u.size());
  std::vector<int> on(T), off(T);
  for (int t = 0; t < T; ++t) {
    const int prev = t == 0 ? u0 : u[t - 1];
    on[t] = std::max(0, u[t] - prev);
    off[t] = std::max(0, prev - u[t]);
  }
  for (int t = 0; t < T; ++t) {
    int started = 0, stopped = 0;
    for (int tau = std::max(0, t - g.startup_time_h + 1); tau <= t - 1; ++tau) started += on[tau];
    for (int tau = std::max(0, t - g.shutdown_time_h + 1); tau <= t - 1; ++tau) stopped += off[tau];
    if (u[t] < started) return false;
    if (u[t] > g.n_units - stopped) return false;
  }
  return true;
}

/// Dispatch cost (marginal only) for fixed commitment, or nullopt.
inline std::optional<double> dispatch_cost(const fruc::Scenario& s,
                                           const std::vector<std::vector<int>>& u) {
  const int T = s.horizon();
  const int G = static_cast<int>(s.groups.size());
  const int S = static_cast<int>(s.storage.size());
  DenseLp lp;
  std::vector<std::vector<int>> p(T, std::vector<int>(G));
  std::vector<std::vector<int>> c(T, std::vector<int>(S)), d(T, std::vector<int>(S)),
      e(T, std::vector<int>(S));
  std::vector<int> xi(T);
  const auto& pr = s.profile;
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      const auto& grp = s.groups[g];
      p[t][g] = lp.add_var(u[t][g] * grp.msg_mw, u[t][g] * grp.unit_capacity_mw,
                           grp.marginal_cost);
    }
    xi[t] = lp.add_var(0.0, pr.wind_mw(t) + pr.solar_mw(t), 0.0);
    for (int k = 0; k < S; ++k) {
      const auto& st = s.storage[k];
      c[t][k] = lp.add_var(0.0, st.p_charge_max_mw, 0.0);
      d[t][k] = lp.add_var(0.0, st.p_discharge_max_mw, 0.0);
      e[t][k] = lp.add_var(st.e_min_mwh, st.e_max_mwh, 0.0);
    }
  }
  for (int t = 0; t < T; ++t) {
    // sum P + discharge + import + wind + solar - curtail = demand + charge
    std::vector<std::pair<int, double>> bal;
    for (int g = 0; g < G; ++g) bal.emplace_back(p[t][g], 1.0);
    for (int k = 0; k < S; ++k) {
      bal.emplace_back(d[t][k], 1.0);
      bal.emplace_back(c[t][k], -1.0);
    }
    bal.emplace_back(xi[t], -1.0);
    lp.add_row(bal, RowSense::Eq,
               pr.demand_mw(t) - pr.interconnector_mw(t) - pr.wind_mw(t) - pr.solar_mw(t));
    for (int g = 0; g < G; ++g) {
      const auto& grp = s.groups[g];
      const double up = u[t][g] * grp.ramp_up_mw_per_h;
      const double dn = u[t][g] * grp.ramp_down_mw_per_h;
      if (t == 0) {
        const double p0 = s.initial_state[g].output_mw;
        lp.add_row({{p[0][g], 1.0}}, RowSense::Le, p0 + up);
        lp.add_row({{p[0][g], -1.0}}, RowSense::Le, dn - p0);
      } else {
        lp.add_row({{p[t][g], 1.0}, {p[t - 1][g], -1.0}}, RowSense::Le, up);
        lp.add_row({{p[t - 1][g], 1.0}, {p[t][g], -1.0}}, RowSense::Le, dn);
      }
    }
    for (int k = 0; k < S; ++k) {
      const auto& st = s.storage[k];
      std::vector<std::pair<int, double>> soc{{e[t][k], 1.0},
                                              {c[t][k], -st.efficiency},
                                              {d[t][k], 1.0 / st.efficiency}};
      double rhs = 0.0;
      if (t == 0) rhs = st.e_initial_mwh;
      else soc.emplace_back(e[t - 1][k], -1.0);
      lp.add_row(soc, RowSense::Eq, rhs);
    }
  }
  for (int k = 0; k < S; ++k)
    lp.add_row({{e[T - 1][k], 1.0}}, RowSense::Eq, s.storage[k].e_initial_mwh);

  const auto r = solve_dense(lp);
  if (!r.feasible) return std::nullopt;
  return r.objective;
}

inline UcOracleResult solve_uc_by_enumeration(const fruc::Scenario& s) {
  const int T = s.horizon();
  const int G = static_cast<int>(s.groups.size());

  // Admissible commitment sequences per group.
  std::vector<std::vector<std::vector<int>>> per_group(G);
  for (int g = 0; g < G; ++g) {
    const auto& grp = s.groups[g];
    const int lo = grp.must_run() ? grp.n_units : 0;
    std::vector<int> seq(T, lo);
    while (true) {
      if (updown_ok(grp, s.initial_state[g].units_online, seq)) per_group[g].push_back(seq);
      int t = 0;
      while (t < T && seq[t] == grp.n_units) seq[t++] = lo;
      if (t == T) break;
      ++seq[t];
    }
  }

  UcOracleResult best;
  for (const auto& options : per_group)
    if (options.empty()) return best;
  std::vector<std::size_t> pick(G, 0);
  while (true) {
    std::vector<std::vector<int>> u(T, std::vector<int>(G));
    double fixed = 0.0;
    for (int g = 0; g < G; ++g) {
      const auto& grp = s.groups[g];
      const auto& seq = per_group[g][pick[g]];
      for (int t = 0; t < T; ++t) {
        u[t][g] = seq[t];
        const int prev = t == 0 ? s.initial_state[g].units_online : seq[t - 1];
        fixed += grp.no_load_cost * seq[t] + grp.startup_cost * std::max(0, seq[t] - prev);
      }
    }
    ++best.sequences_checked;
    if (fixed < best.objective) {
      if (const auto lp = dispatch_cost(s, u)) {
        if (fixed + *lp < best.objective) {
          best.objective = fixed + *lp;
          best.online = u;
          best.feasible = true;
        }
      }
    }
    int g = 0;
    while (g < G && ++pick[g] == per_group[g].size()) pick[g++] = 0;
    if (g == G) break;
  }
  return best;
}

}  // namespace oracle
