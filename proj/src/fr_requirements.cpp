#include "fruc/fr_requirements.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fruc {

double nadir_constant(const FrequencyParams& f, double efr_mw) {
  const double uncovered = f.infeed_loss_mw - efr_mw;
  if (uncovered <= 0.0) return 0.0;
  return f.f_nominal_hz * f.t_pfr_s * uncovered * uncovered /
         (4.0 * f.delta_f_max_hz);
}

ChordSegmentSet build_chord_segments(double k, double h_min, double h_max,
                                     int n_segments) {
  if (!(h_min > 0.0 && h_min < h_max))
    throw std::invalid_argument("chord range needs 0 < h_min < h_max");
  if (n_segments < 1) throw std::invalid_argument("need at least one segment");
  if (k < 0.0) throw std::invalid_argument("nadir constant must be >= 0");

  ChordSegmentSet set;
  set.k = k;
  if (k == 0.0) {
    set.grid = Eigen::Vector2d(h_min, h_max);
    set.slopes = Eigen::VectorXd::Zero(1);
    set.intercepts = Eigen::VectorXd::Zero(1);
    return set;
  }
  const Eigen::VectorXd inverse =
      Eigen::VectorXd::LinSpaced(n_segments + 1, 1.0 / h_min, 1.0 / h_max);
  set.grid = inverse.cwiseInverse();
  set.grid(0) = h_min;
  set.grid(n_segments) = h_max;

  const auto lo = set.grid.head(n_segments).array();
  const auto hi = set.grid.tail(n_segments).array();
  set.slopes = (-k / (lo * hi)).matrix();
  set.intercepts = (k * (lo + hi) / (lo * hi)).matrix();
  return set;
}

InertiaRange inertia_range(const Scenario& s) {
  double must_run = 0.0;
  double fleet = 0.0;
  for (const auto& g : s.groups) {
    const double full = g.unit_capacity_mw * g.inertia_constant_s * g.n_units;
    fleet += full;
    if (g.must_run()) must_run += full;
  }
  const auto& d = s.profile.demand_mw;
  const double h_l = s.freq.load_inertia_s;
  InertiaRange r;
  r.min = must_run + (d.size() ? d.minCoeff() : 0.0) * h_l;
  r.max = fleet + (d.size() ? d.maxCoeff() : 0.0) * h_l;
  return r;
}

double max_pfr_capability(const Scenario& s) {
  double cap = 0.0;
  for (const auto& g : s.groups) {
    if (g.must_run()) continue;
    cap += g.n_units *
           std::min(g.pfr_max_mw, g.governor_slope * g.unit_capacity_mw);
  }
  for (const auto& st : s.storage)
    cap += std::min(st.fr_max_mw, st.p_discharge_max_mw);
  return cap;
}

ChordSegmentSet default_chord_segments(const Scenario& s, int n_segments) {
  const InertiaRange range = inertia_range(s);
  const double k = nadir_constant(s.freq);
  double lo = range.min;
  const double cap = max_pfr_capability(s);
  // Below k / cap no dispatch can hold enough PFR, so nothing is lost by
  // starting the envelope there.
  if (k > 0.0 && cap > 0.0) lo = std::max(lo, k / cap);
  double hi = range.max;
  if (!(hi > 0.0)) hi = 1.0;
  if (!(lo > 0.0) || lo >= hi) lo = std::min(hi * 0.5, lo > 0.0 ? lo : hi * 0.5);
  return build_chord_segments(k, lo, hi, n_segments);
}

void add_inertia_expression(MipModel& m, const UcVariableIndex& idx,
                            const Scenario& s) {
  for (int t = 0; t < idx.periods; ++t) {
    LinearExpr e{{idx.inertia[t], 1.0}};
    for (int g = 0; g < idx.groups; ++g) {
      const auto& grp = s.groups[g];
      e.add(idx.online[t][g], -grp.unit_capacity_mw * grp.inertia_constant_s);
    }
    m.add_constraint("inertia_t" + std::to_string(t + 1), e, Sense::Equal,
                     s.profile.demand_mw(t) * s.freq.load_inertia_s);
  }
}

double pfr_floor(const Scenario& s, int t) {
  const auto& f = s.freq;
  return f.infeed_loss_mw - f.efr_mw -
         f.damping_per_hz * s.damping_demand(t) * f.delta_f_max_hz;
}

double sfr_floor(const Scenario& s, int t) {
  const auto& f = s.freq;
  const double floor =
      f.infeed_loss_mw - f.damping_per_hz * s.damping_demand(t) * f.delta_f_ss_hz;
  return f.qss_includes_efr ? floor - f.efr_mw : floor;
}

void add_nadir_constraints(MipModel& m, const UcVariableIndex& idx,
                           const Scenario& s, const ChordSegmentSet& segments) {
  const InertiaRange range = inertia_range(s);
  if (segments.grid.size() < 2)
    throw ModelError("chord segment set is empty");
  if (segments.grid(segments.grid.size() - 1) < range.max * (1.0 - 1e-12))
    throw ModelError("chord segments end at H = " +
                     std::to_string(segments.grid(segments.grid.size() - 1)) +
                     " below the largest schedulable inertia " +
                     std::to_string(range.max));
  const double h0 = segments.grid(0);
  const double cap = max_pfr_capability(s);
  const double k = nadir_constant(s.freq);
  const double safe_lo =
      std::max(range.min, (k > 0.0 && cap > 0.0) ? k / cap : 0.0);
  if (k > 0.0 && h0 > safe_lo * (1.0 + 1e-12))
    throw ModelError("chord segments start at H = " + std::to_string(h0) +
                     " above the smallest feasible inertia " +
                     std::to_string(safe_lo));
  if (std::abs(segments.k - k) > 1e-9 * std::max(1.0, k))
    throw ModelError("chord segments built for a different nadir constant");

  for (int t = 0; t < idx.periods; ++t) {
    const int h = idx.inertia[t];
    const int p = idx.pfr_req[t];
    if (k > 0.0) {
      // Chords under-estimate k/H left of H_0, so H_0 is enforced.
      m.add_constraint("hmin_t" + std::to_string(t + 1), {{h, 1.0}},
                       Sense::GreaterEqual, h0);
      for (int i = 0; i < segments.size(); ++i)
        m.add_constraint(
            "nadir_t" + std::to_string(t + 1) + "_s" + std::to_string(i),
            {{p, 1.0}, {h, -segments.slopes(i)}}, Sense::GreaterEqual,
            segments.intercepts(i));
    }
    m.add_constraint("pfrfloor_t" + std::to_string(t + 1), {{p, 1.0}},
                     Sense::GreaterEqual, pfr_floor(s, t));
  }
}

void add_qss_constraint(MipModel& m, const UcVariableIndex& idx,
                        const Scenario& s) {
  for (int t = 0; t < idx.periods; ++t)
    m.add_constraint("qss_t" + std::to_string(t + 1), {{idx.sfr_req[t], 1.0}},
                     Sense::GreaterEqual, sfr_floor(s, t));
}

void add_provision_limits(MipModel& m, const UcVariableIndex& idx,
                          const Scenario& s) {
  for (int t = 0; t < idx.periods; ++t) {
    const std::string ts = "_t" + std::to_string(t + 1) + "_";
    for (int g = 0; g < idx.groups; ++g) {
      const auto& grp = s.groups[g];
      const int u = idx.online[t][g];
      const int p = idx.p_gen[t][g];
      const int pth = idx.pfr_thermal[t][g];
      const int sth = idx.sfr_thermal[t][g];
      const double rho = grp.governor_slope;
      m.add_constraint("pthcap" + ts + grp.name, {{pth, 1.0}, {u, -grp.pfr_max_mw}},
                       Sense::LessEqual, 0.0);
      m.add_constraint("pthslope" + ts + grp.name,
                       {{pth, 1.0}, {u, -rho * grp.unit_capacity_mw}, {p, rho}},
                       Sense::LessEqual, 0.0);
      m.add_constraint("sthcap" + ts + grp.name, {{sth, 1.0}, {u, -grp.sfr_max_mw}},
                       Sense::LessEqual, 0.0);
      m.add_constraint("sthhead" + ts + grp.name,
                       {{sth, 1.0}, {u, -grp.unit_capacity_mw}, {p, 1.0}},
                       Sense::LessEqual, 0.0);
    }
    for (int k = 0; k < idx.stores; ++k) {
      const auto& st = s.storage[k];
      const int ps = idx.pfr_storage[t][k];
      const int ss = idx.sfr_storage[t][k];
      m.add_constraint("stcap" + ts + st.name, {{ps, 1.0}, {ss, 1.0}},
                       Sense::LessEqual, st.fr_max_mw);
      m.add_constraint("sthead" + ts + st.name,
                       {{ps, 1.0}, {ss, 1.0}, {idx.discharge[t][k], 1.0}},
                       Sense::LessEqual, st.p_discharge_max_mw);
    }
  }
}

void add_adequacy_constraints(MipModel& m, const UcVariableIndex& idx,
                              const Scenario& s) {
  (void)s;
  for (int t = 0; t < idx.periods; ++t) {
    LinearExpr pfr{{idx.pfr_req[t], -1.0}};
    LinearExpr sfr{{idx.sfr_req[t], -1.0}};
    for (int g = 0; g < idx.groups; ++g) {
      pfr.add(idx.pfr_thermal[t][g], 1.0);
      sfr.add(idx.sfr_thermal[t][g], 1.0);
    }
    for (int k = 0; k < idx.stores; ++k) {
      pfr.add(idx.pfr_storage[t][k], 1.0);
      sfr.add(idx.sfr_storage[t][k], 1.0);
    }
    m.add_constraint("pfrmeet_t" + std::to_string(t + 1), pfr, Sense::GreaterEqual, 0.0);
    m.add_constraint("sfrmeet_t" + std::to_string(t + 1), sfr, Sense::GreaterEqual, 0.0);
  }
}

HourlyRequirement tight_requirement(const Scenario& s,
                                    const ChordSegmentSet& segments, int t,
                                    double inertia) {
  HourlyRequirement r;
  r.inertia = inertia;
  const double floor = std::max(0.0, pfr_floor(s, t));
  r.pfr = floor;
  r.binding = PfrBinding::AdequacyFloor;
  if (segments.k > 0.0) {
    Eigen::Index arg = 0;
    const double chord =
        (segments.intercepts + segments.slopes * inertia).maxCoeff(&arg);
    if (chord > floor) {
      r.pfr = chord;
      r.binding = PfrBinding::NadirChord;
      r.chord_segment = static_cast<int>(arg);
    }
  }
  r.sfr = std::max(0.0, sfr_floor(s, t));
  return r;
}

std::string to_string(PfrBinding binding) {
  return binding == PfrBinding::NadirChord ? "nadir_chord" : "adequacy_floor";
}

}  // namespace fruc
