#include "fruc/scenario_runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace fruc {

namespace {

int worker_count(const RunOptions& o) {
  if (o.jobs > 0) return o.jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string join_violations(const std::vector<Violation>& v) {
  std::string out = "invalid scenario:";
  for (const auto& x : v) out += "\n  " + x.field + ": " + x.message;
  return out;
}

/// Scenario with E applied and the damping reference pinned to the full
/// horizon, so windows cut from it share one reference.
Scenario prepared(const Scenario& in, double efr_mw) {
  Scenario s = in;
  s.freq.efr_mw = efr_mw;
  if (s.freq.damping_mode == DampingDemandMode::ConstantReference &&
      !s.freq.damping_reference_mw && s.horizon() > 0)
    s.freq.damping_reference_mw = s.profile.demand_mw.mean();
  return s;
}

Scenario window_of(const Scenario& s, int first, int count,
                   const std::vector<InitialGroupState>& init) {
  Scenario w = s;
  w.profile = s.profile.slice(first, count);
  w.profile_path.reset();
  w.initial_state = init;
  return w;
}

double hour_cost(const Scenario& s, const UcVariableIndex& idx,
                 const Eigen::VectorXd& x, int t) {
  double c = 0.0;
  for (int g = 0; g < idx.groups; ++g) {
    const auto& grp = s.groups[g];
    c += grp.marginal_cost * x(idx.p_gen[t][g]) +
         grp.no_load_cost * x(idx.online[t][g]) +
         grp.startup_cost * x(idx.start_ups[t][g]);
  }
  return c;
}

struct WindowOutcome {
  Solution solution;
  BuiltModel built;
};

WindowOutcome solve_window(const Scenario& w, bool include_fr,
                           const RunOptions& options,
                           const std::optional<ChordSegmentSet>& segments,
                           const SolverBackend& backend, int first_hour) {
  WindowOutcome out{Solution{}, build_model(w, include_fr, options.n_segments, segments)};
  out.solution = solve(out.built.model, backend, options.solve);
  if (!out.solution.has_values()) {
    std::ostringstream msg;
    msg << "window at hours " << first_hour + 1 << "-" << first_hour + w.horizon()
        << ": solver status " << to_string(out.solution.status);
    if (!out.solution.detail.empty()) msg << " (" << out.solution.detail << ")";
    if (out.solution.status == SolveStatus::Infeasible)
      msg << "; " << diagnose_infeasibility(w, options, include_fr, first_hour);
    throw SolveFailure(msg.str());
  }
  return out;
}

std::vector<InitialGroupState> carry_over(const Scenario& s,
                                          const UcVariableIndex& idx,
                                          const Eigen::VectorXd& x) {
  std::vector<InitialGroupState> init(s.groups.size());
  const int last = idx.periods - 1;
  for (int g = 0; g < idx.groups; ++g) {
    init[g].units_online = static_cast<int>(std::lround(x(idx.online[last][g])));
    init[g].output_mw = x(idx.p_gen[last][g]);
  }
  return init;
}

}  // namespace

ScenarioInvalid::ScenarioInvalid(std::vector<Violation> v)
    : std::runtime_error(join_violations(v)), violations_(std::move(v)) {}

Eigen::VectorXd ScenarioResult::column(double HourlyResult::*field) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(hours.size()));
  for (std::size_t i = 0; i < hours.size(); ++i) v(i) = hours[i].*field;
  return v;
}

BuiltModel build_model(const Scenario& s, bool include_fr, int n_segments,
                       const std::optional<ChordSegmentSet>& segments) {
  BuiltModel b;
  b.index = register_uc_variables(b.model, s, include_fr);
  add_objective(b.model, b.index, s);
  add_power_balance(b.model, b.index, s);
  add_commitment_constraints(b.model, b.index, s);
  add_ramp_constraints(b.model, b.index, s);
  add_storage_constraints(b.model, b.index, s);
  if (include_fr) {
    b.segments = segments ? *segments : default_chord_segments(s, n_segments);
    add_inertia_expression(b.model, b.index, s);
    add_nadir_constraints(b.model, b.index, s, b.segments);
    add_qss_constraint(b.model, b.index, s);
    add_provision_limits(b.model, b.index, s);
    add_adequacy_constraints(b.model, b.index, s);
  }
  return b;
}

std::string diagnose_infeasibility(const Scenario& w, const RunOptions& options,
                                   bool include_fr, int hour_offset) {
  auto backend = make_backend(options.solver, options.solver_path);
  SolveOptions quick = options.solve;
  quick.polish = false;
  const auto segments =
      include_fr ? std::optional(default_chord_segments(w, options.n_segments))
                 : std::nullopt;
  const auto feasible_prefix = [&](int len) {
    const Scenario p = window_of(w, 0, len, w.initial_state);
    const auto built = build_model(p, include_fr, options.n_segments, segments);
    return solve(built.model, *backend, quick).status != SolveStatus::Infeasible;
  };

  // Smallest infeasible prefix by bisection.
  int lo = 1, hi = w.horizon();
  if (feasible_prefix(hi)) return "no infeasible prefix found";
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (feasible_prefix(mid)) lo = mid + 1;
    else hi = mid;
  }
  const int t = lo - 1;

  std::ostringstream msg;
  msg << "first infeasible at hour " << hour_offset + t + 1;
  double capacity = 0.0;
  for (const auto& g : w.groups) capacity += g.unit_capacity_mw * g.n_units;
  for (const auto& st : w.storage) capacity += st.p_discharge_max_mw;
  const auto& pr = w.profile;
  const double supply =
      capacity + pr.wind_mw(t) + pr.solar_mw(t) + pr.interconnector_mw(t);
  if (pr.demand_mw(t) > supply)
    msg << " (demand " << pr.demand_mw(t) << " MW exceeds supply " << supply << " MW)";
  if (include_fr) {
    const double cap = max_pfr_capability(w);
    const double need = std::max(pfr_floor(w, t),
                                 segments->k / segments->grid(segments->grid.size() - 1));
    if (need > cap)
      msg << " (PFR need " << need << " MW exceeds fleet capability " << cap << " MW)";
    double sfr_cap = 0.0;
    for (const auto& g : w.groups)
      if (!g.must_run()) sfr_cap += g.n_units * g.sfr_max_mw;
    for (const auto& st : w.storage) sfr_cap += st.fr_max_mw;
    if (sfr_floor(w, t) > sfr_cap)
      msg << " (SFR need " << sfr_floor(w, t) << " MW exceeds fleet capability "
          << sfr_cap << " MW)";
  }
  return msg.str();
}

ResponsePortfolio portfolio_for_hour(const FrequencyParams& f, double efr_mw,
                                     const HourlyResult& h) {
  ResponsePortfolio p;
  p.inertia_mva_s = h.inertia_mva_s;
  p.demand_mw = h.damping_demand_mw;
  p.efr_mw = efr_mw;
  p.t_efr_s = f.t_efr_s;
  p.pfr_mw = h.pfr_req_mw;
  p.t_pfr_s = f.t_pfr_s;
  p.sfr_mw = h.sfr_req_mw;
  p.infeed_loss_mw = f.infeed_loss_mw;
  p.damping_per_hz = f.damping_per_hz;
  p.f_nominal_hz = f.f_nominal_hz;
  return p;
}

namespace {

template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> tasks;
  for (int j = 0; j < jobs; ++j)
    tasks.push_back(std::async(std::launch::async, [&, j] {
      for (int i = j; i < n; i += jobs) fn(i);
    }));
  for (auto& t : tasks) t.get();
}

double schedule_cost(const Scenario& s, const RunOptions& options, bool include_fr,
                     const std::optional<ChordSegmentSet>& segments,
                     ScenarioResult* result) {
  auto backend = make_backend(options.solver, options.solver_path);
  const int T = s.horizon();
  const int window = options.window_hours > 0 ? options.window_hours : T;
  std::vector<InitialGroupState> init = s.initial_state;
  double cost = 0.0;

  for (int first = 0; first < T; first += window) {
    const int count = std::min(window, T - first);
    const Scenario w = window_of(s, first, count, init);
    const WindowOutcome o = solve_window(w, include_fr, options, segments, *backend, first);
    const auto& idx = o.built.index;
    const Eigen::VectorXd& x = o.solution.values;
    init = carry_over(w, idx, x);
    cost += recompute_cost(idx, w, x).total();
    if (!result) continue;

    result->windows.push_back({first, count, o.solution.status, o.solution.objective,
                               o.solution.mip_gap, o.solution.wall_time_s});
    result->solver_objective += o.solution.objective;
    for (int t = 0; t < count; ++t) {
      HourlyResult h;
      h.hour = first + t;
      h.demand_mw = w.profile.demand_mw(t);
      h.wind_mw = w.profile.wind_mw(t);
      h.solar_mw = w.profile.solar_mw(t);
      h.interconnector_mw = w.profile.interconnector_mw(t);
      h.curtailment_mw = x(idx.curtailment[t]);
      h.damping_demand_mw = w.damping_demand(t);
      for (int g = 0; g < idx.groups; ++g) {
        h.dispatch_mw.push_back(x(idx.p_gen[t][g]));
        h.online.push_back(static_cast<int>(std::lround(x(idx.online[t][g]))));
        h.start_ups.push_back(static_cast<int>(std::lround(x(idx.start_ups[t][g]))));
      }
      for (int k = 0; k < idx.stores; ++k) {
        h.charge_mw.push_back(x(idx.charge[t][k]));
        h.discharge_mw.push_back(x(idx.discharge[t][k]));
        h.energy_mwh.push_back(x(idx.energy[t][k]));
      }
      if (include_fr) {
        h.inertia_mva_s = x(idx.inertia[t]);
        // The solver may leave slack on P_req and S_req; report the
        // smallest values the constraints allow at the scheduled inertia.
        const HourlyRequirement req = tight_requirement(w, o.built.segments, t, h.inertia_mva_s);
        h.pfr_req_mw = req.pfr;
        h.sfr_req_mw = req.sfr;
        h.pfr_binding = req.binding;
        h.chord_segment = req.chord_segment;
        for (int g = 0; g < idx.groups; ++g) {
          h.pfr_thermal_mw.push_back(x(idx.pfr_thermal[t][g]));
          h.sfr_thermal_mw.push_back(x(idx.sfr_thermal[t][g]));
        }
        for (int k = 0; k < idx.stores; ++k) {
          h.pfr_storage_mw.push_back(x(idx.pfr_storage[t][k]));
          h.sfr_storage_mw.push_back(x(idx.sfr_storage[t][k]));
        }
      }
      h.cost = hour_cost(w, idx, x, t);
      result->hours.push_back(std::move(h));
    }
  }
  return cost;
}

}  // namespace

double run_without_fr(const Scenario& scenario, const RunOptions& options) {
  if (auto v = validate_scenario(scenario); !v.empty()) throw ScenarioInvalid(std::move(v));
  return schedule_cost(prepared(scenario, scenario.freq.efr_mw), options, false,
                       std::nullopt, nullptr);
}

ScenarioResult run_scenario(const Scenario& scenario, double efr_mw,
                            const RunOptions& options) {
  if (efr_mw < 0.0) throw ScenarioInvalid(std::vector<Violation>{{"efr_mw", "must be >= 0"}});
  const Scenario s = prepared(scenario, efr_mw);
  if (auto v = validate_scenario(s); !v.empty()) throw ScenarioInvalid(std::move(v));

  ScenarioResult r;
  r.scenario = s.name;
  r.efr_mw = efr_mw;
  r.freq = s.freq;
  r.start_day_of_year = s.start_day_of_year;
  r.n_segments = options.n_segments;
  r.solver = options.solver;
  for (const auto& g : s.groups) r.group_names.push_back(g.name);
  for (const auto& st : s.storage) r.storage_names.push_back(st.name);

  // One chord set for the whole horizon keeps every window on the same
  // approximation of the nadir curve.
  const ChordSegmentSet segments = default_chord_segments(s, options.n_segments);
  r.total_cost = 0.0;
  schedule_cost(s, options, true, segments, &r);
  for (const auto& h : r.hours) r.total_cost += h.cost;

  if (options.compute_balancing) {
    r.energy_cost = schedule_cost(s, options, false, std::nullopt, nullptr);
    r.balancing_cost = r.total_cost - r.energy_cost;
    r.balancing_computed = true;
  } else {
    r.energy_cost = r.total_cost;
  }

  if (options.verify) {
    parallel_for(static_cast<int>(r.hours.size()), worker_count(options), [&](int i) {
      auto& h = r.hours[i];
      const auto trace = simulate(portfolio_for_hour(r.freq, efr_mw, h),
                                  options.verify_dt_s, options.verify_t_end_s);
      h.verification = check_compliance(trace, r.freq.delta_f_max_hz, r.freq.delta_f_ss_hz);
    });
    for (const auto& h : r.hours)
      if (!h.verification->pass) ++r.verification_failures;
  }
  return r;
}

SweepResult efr_sweep(const Scenario& scenario, const std::vector<double>& levels,
                      const RunOptions& options) {
  if (levels.empty() || !std::is_sorted(levels.begin(), levels.end()) ||
      std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw ScenarioInvalid(std::vector<Violation>{{"levels", "levels must be strictly ascending"}});
  if (levels.front() != 0.0)
    throw ScenarioInvalid(std::vector<Violation>{{"levels", "levels must include 0"}});

  RunOptions per_level = options;
  // The FR-free schedule does not depend on E, so it is never needed here.
  per_level.compute_balancing = false;
  per_level.jobs = 1;

  SweepResult out;
  out.runs.resize(levels.size());
  parallel_for(static_cast<int>(levels.size()), worker_count(options), [&](int i) {
    out.runs[i] = run_scenario(scenario, levels[i], per_level);
  });

  const double base = out.runs.front().total_cost;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& r = out.runs[i];
    SweepRow row;
    row.efr_mw = levels[i];
    row.total_cost = r.total_cost;
    if (!r.hours.empty()) {
      row.mean_pfr_mw = r.column(&HourlyResult::pfr_req_mw).mean();
      row.mean_sfr_mw = r.column(&HourlyResult::sfr_req_mw).mean();
    }
    row.abatement = base - r.total_cost;
    row.value_per_mw = levels[i] > 0.0 ? row.abatement / levels[i] : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

std::string to_string(Season s) {
  switch (s) {
    case Season::Winter: return "winter";
    case Season::Spring: return "spring";
    case Season::Summer: return "summer";
    case Season::Autumn: return "autumn";
  }
  return "unknown";
}

Season season_of_hour(int start_day_of_year, int hour) {
  static constexpr int kMonthEnd[12] = {31,  59,  90,  120, 151, 181,
                                        212, 243, 273, 304, 334, 365};
  const int day = (start_day_of_year + hour / 24) % 365;
  int month = 0;
  while (day >= kMonthEnd[month]) ++month;
  if (month == 11 || month <= 1) return Season::Winter;
  if (month <= 4) return Season::Spring;
  if (month <= 7) return Season::Summer;
  return Season::Autumn;
}

std::vector<SeasonRow> seasonal_report(const ScenarioResult& without,
                                       const ScenarioResult& with) {
  if (without.hours.size() != with.hours.size() ||
      without.start_day_of_year != with.start_day_of_year)
    throw std::invalid_argument("results cover different horizons");

  std::array<SeasonRow, 4> acc{};
  for (int k = 0; k < 4; ++k) acc[k].season = static_cast<Season>(k);
  for (std::size_t i = 0; i < without.hours.size(); ++i) {
    const auto& a = without.hours[i];
    const auto& b = with.hours[i];
    if (a.hour != b.hour) throw std::invalid_argument("results cover different horizons");
    auto& row = acc[static_cast<int>(season_of_hour(without.start_day_of_year, a.hour))];
    ++row.hours;
    row.mean_inertia_mva_s += a.inertia_mva_s;
    row.mean_pfr_without += a.pfr_req_mw;
    row.mean_pfr_with += b.pfr_req_mw;
    row.mean_sfr_without += a.sfr_req_mw;
    row.mean_sfr_with += b.sfr_req_mw;
  }
  std::vector<SeasonRow> rows;
  for (auto row : acc) {
    if (row.hours == 0) continue;
    const double n = row.hours;
    row.mean_inertia_mva_s /= n;
    row.mean_pfr_without /= n;
    row.mean_pfr_with /= n;
    row.mean_sfr_without /= n;
    row.mean_sfr_with /= n;
    row.pfr_offset = row.mean_pfr_without - row.mean_pfr_with;
    row.sfr_offset = row.mean_sfr_without - row.mean_sfr_with;
    rows.push_back(row);
  }
  return rows;
}

double closed_form_offset_per_mw(const FrequencyParams& f, double efr_mw,
                                 double inertia) {
  if (!(efr_mw > 0.0) || !(inertia > 0.0))
    throw std::invalid_argument("need efr_mw > 0 and inertia > 0");
  return (nadir_constant(f, 0.0) - nadir_constant(f, efr_mw)) / inertia / efr_mw;
}

namespace {

Eigen::VectorXd bin_edges(const Eigen::VectorXd& v, int n) {
  double lo = v.minCoeff(), hi = v.maxCoeff();
  if (hi - lo < 1e-9 * std::max(1.0, std::abs(hi))) {
    // Degenerate axis: one populated bin centred on the value.
    lo -= 0.5;
    hi += 0.5;
  }
  return Eigen::VectorXd::LinSpaced(n + 1, lo, hi);
}

int bin_of(const Eigen::VectorXd& edges, double x) {
  const int n = static_cast<int>(edges.size()) - 1;
  const double w = (edges(n) - edges(0)) / n;
  return std::clamp(static_cast<int>((x - edges(0)) / w), 0, n - 1);
}

}  // namespace

EffectivenessGrid effectiveness_grid(const ScenarioResult& without,
                                     const ScenarioResult& with, double efr_mw,
                                     int n_bins) {
  if (!(efr_mw > 0.0)) throw std::invalid_argument("efr_mw must be positive");
  if (n_bins < 1) throw std::invalid_argument("n_bins must be at least 1");
  if (without.hours.size() != with.hours.size() || without.hours.empty())
    throw std::invalid_argument("results cover different horizons");

  EffectivenessGrid g;
  g.n_bins = n_bins;
  g.hourly_inertia = without.column(&HourlyResult::inertia_mva_s);
  g.hourly_demand = without.column(&HourlyResult::demand_mw);
  g.hourly_offset_per_mw = (without.column(&HourlyResult::pfr_req_mw) -
                            with.column(&HourlyResult::pfr_req_mw)) / efr_mw;
  g.h_edges = bin_edges(g.hourly_inertia, n_bins);
  g.d_edges = bin_edges(g.hourly_demand, n_bins);
  g.inertia_demand_correlation = pearson(g.hourly_inertia, g.hourly_demand);

  g.cells.resize(static_cast<std::size_t>(n_bins * n_bins));
  for (int i = 0; i < n_bins; ++i)
    for (int j = 0; j < n_bins; ++j) {
      auto& c = g.cells[static_cast<std::size_t>(i * n_bins + j)];
      c.h_lo = g.h_edges(i);
      c.h_hi = g.h_edges(i + 1);
      c.d_lo = g.d_edges(j);
      c.d_hi = g.d_edges(j + 1);
    }
  for (Eigen::Index k = 0; k < g.hourly_inertia.size(); ++k) {
    auto& c = g.cells[static_cast<std::size_t>(bin_of(g.h_edges, g.hourly_inertia(k)) * n_bins +
                                               bin_of(g.d_edges, g.hourly_demand(k)))];
    c.mean_offset_per_mw += g.hourly_offset_per_mw(k);
    ++c.count;
  }
  for (auto& c : g.cells)
    if (c.count > 0) c.mean_offset_per_mw /= c.count;
  return g;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("correlation needs two equal series of length >= 2");
  const Eigen::ArrayXd a = x.array() - x.mean();
  const Eigen::ArrayXd b = y.array() - y.mean();
  const double den = std::sqrt((a * a).sum() * (b * b).sum());
  return den > 0.0 ? (a * b).sum() / den : 0.0;
}

Eigen::VectorXd ranks(const Eigen::VectorXd& x) {
  const auto n = x.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&x](auto a, auto b) { return x(a) < x(b); });
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && x(order[j + 1]) == x(order[i])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) r(order[k]) = avg;
    i = j + 1;
  }
  return r;
}

double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return pearson(ranks(x), ranks(y));
}

double spearman_negative_p_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 int permutations, unsigned seed) {
  const Eigen::VectorXd rx = ranks(x);
  Eigen::VectorXd ry = ranks(y);
  const double observed = pearson(rx, ry);
  std::mt19937 rng(seed);
  int as_extreme = 0;
  for (int i = 0; i < permutations; ++i) {
    std::shuffle(ry.begin(), ry.end(), rng);
    if (pearson(rx, ry) <= observed) ++as_extreme;
  }
  return (as_extreme + 1.0) / (permutations + 1.0);
}

// ---------------------------------------------------------------- output

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(12);
  return out;
}

}  // namespace

void write_hourly_csv(const std::filesystem::path& path, const ScenarioResult& r) {
  auto out = open_out(path);
  out << "hour,demand_mw,wind_mw,solar_mw,interconnector_mw,curtailment_mw,"
         "damping_demand_mw,inertia_mva_s,pfr_req_mw,sfr_req_mw,pfr_binding,cost_gbp";
  for (const auto& g : r.group_names)
    out << ",pgen_" << g << ",online_" << g << ",startups_" << g << ",pfr_" << g
        << ",sfr_" << g;
  for (const auto& s : r.storage_names)
    out << ",charge_" << s << ",discharge_" << s << ",energy_" << s << ",pfr_" << s
        << ",sfr_" << s;
  out << ",nadir_hz,qss_hz,verified\n";

  const auto or_zero = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : 0.0;
  };
  for (const auto& h : r.hours) {
    out << h.hour + 1 << ',' << h.demand_mw << ',' << h.wind_mw << ',' << h.solar_mw
        << ',' << h.interconnector_mw << ',' << h.curtailment_mw << ','
        << h.damping_demand_mw << ',' << h.inertia_mva_s << ',' << h.pfr_req_mw << ','
        << h.sfr_req_mw << ',' << to_string(h.pfr_binding) << ',' << h.cost;
    for (std::size_t g = 0; g < r.group_names.size(); ++g)
      out << ',' << h.dispatch_mw[g] << ',' << h.online[g] << ',' << h.start_ups[g]
          << ',' << or_zero(h.pfr_thermal_mw, g) << ',' << or_zero(h.sfr_thermal_mw, g);
    for (std::size_t k = 0; k < r.storage_names.size(); ++k)
      out << ',' << h.charge_mw[k] << ',' << h.discharge_mw[k] << ',' << h.energy_mwh[k]
          << ',' << or_zero(h.pfr_storage_mw, k) << ',' << or_zero(h.sfr_storage_mw, k);
    if (h.verification)
      out << ',' << h.verification->nadir_hz << ',' << h.verification->qss_hz << ','
          << (h.verification->pass ? 1 : 0);
    else
      out << ",,,";
    out << '\n';
  }
}

void write_summary_json(const std::filesystem::path& path, const ScenarioResult& r) {
  using nlohmann::json;
  json j;
  j["scenario"] = r.scenario;
  j["efr_mw"] = r.efr_mw;
  j["hours"] = r.hours.size();
  j["start_day_of_year"] = r.start_day_of_year;
  j["costs_gbp"] = {{"total", r.total_cost},
                    {"energy", r.energy_cost},
                    {"balancing", r.balancing_computed ? json(r.balancing_cost) : json()},
                    {"solver_objective", r.solver_objective}};
  const auto& f = r.freq;
  j["frequency"] = {{"f_nominal_hz", f.f_nominal_hz},
                    {"delta_f_max_hz", f.delta_f_max_hz},
                    {"delta_f_ss_hz", f.delta_f_ss_hz},
                    {"t_pfr_s", f.t_pfr_s},
                    {"t_efr_s", f.t_efr_s},
                    {"infeed_loss_mw", f.infeed_loss_mw},
                    {"damping_per_hz", f.damping_per_hz},
                    {"load_inertia_s", f.load_inertia_s},
                    {"damping_reference_mw", f.damping_reference_mw ? json(*f.damping_reference_mw) : json()},
                    {"damping_mode", f.damping_mode == DampingDemandMode::Hourly
                                         ? "hourly" : "constant_reference"},
                    {"qss_includes_efr", f.qss_includes_efr}};
  if (!r.hours.empty()) {
    const Eigen::VectorXd h = r.column(&HourlyResult::inertia_mva_s);
    j["requirements"] = {{"mean_inertia_mva_s", h.mean()},
                         {"min_inertia_mva_s", h.minCoeff()},
                         {"max_inertia_mva_s", h.maxCoeff()},
                         {"mean_pfr_req_mw", r.column(&HourlyResult::pfr_req_mw).mean()},
                         {"mean_sfr_req_mw", r.column(&HourlyResult::sfr_req_mw).mean()}};
  }
  j["groups"] = r.group_names;
  j["storage"] = r.storage_names;
  json windows = json::array();
  for (const auto& w : r.windows)
    windows.push_back({{"first_hour", w.first_hour + 1},
                       {"hours", w.hours},
                       {"status", to_string(w.status)},
                       {"objective", w.objective},
                       {"mip_gap", std::isnan(w.mip_gap) ? json() : json(w.mip_gap)},
                       {"wall_time_s", w.wall_time_s}});
  j["solver"] = {{"name", r.solver}, {"n_segments", r.n_segments}, {"windows", windows}};
  j["verification"] = {{"failures", r.verification_failures},
                       {"checked", std::count_if(r.hours.begin(), r.hours.end(),
                                                 [](const auto& h) { return h.verification.has_value(); })}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& s) {
  auto out = open_out(path);
  out << "efr_mw,total_cost_gbp,mean_pfr_req_mw,mean_sfr_req_mw,abatement_gbp,"
         "value_per_mw_gbp\n";
  for (const auto& r : s.rows)
    out << r.efr_mw << ',' << r.total_cost << ',' << r.mean_pfr_mw << ','
        << r.mean_sfr_mw << ',' << r.abatement << ',' << r.value_per_mw << '\n';
}

void write_grid_csv(const std::filesystem::path& path, const EffectivenessGrid& g) {
  auto out = open_out(path);
  out << "h_lo_mva_s,h_hi_mva_s,d_lo_mw,d_hi_mw,mean_offset_mw_per_mw,count\n";
  for (const auto& c : g.cells)
    out << c.h_lo << ',' << c.h_hi << ',' << c.d_lo << ',' << c.d_hi << ','
        << c.mean_offset_per_mw << ',' << c.count << '\n';
}

void write_seasonal_csv(const std::filesystem::path& path,
                        const std::vector<SeasonRow>& rows) {
  auto out = open_out(path);
  out << "season,hours,mean_inertia_mva_s,pfr_without_mw,pfr_with_mw,pfr_offset_mw,"
         "sfr_without_mw,sfr_with_mw,sfr_offset_mw\n";
  for (const auto& r : rows)
    out << to_string(r.season) << ',' << r.hours << ',' << r.mean_inertia_mva_s << ','
        << r.mean_pfr_without << ',' << r.mean_pfr_with << ',' << r.pfr_offset << ','
        << r.mean_sfr_without << ',' << r.mean_sfr_with << ',' << r.sfr_offset << '\n';
}

VerifyOutcome verify_saved_result(const std::filesystem::path& dir, double dt_s,
                                  double t_end_s) {
  using nlohmann::json;
  std::ifstream js(dir / "summary.json");
  if (!js) throw InputError("missing " + (dir / "summary.json").string());
  json j;
  try {
    j = json::parse(js);
  } catch (const json::exception& e) {
    throw InputError("summary.json: " + std::string(e.what()));
  }
  FrequencyParams f;
  double efr = 0.0;
  try {
    const auto& q = j.at("frequency");
    f.f_nominal_hz = q.at("f_nominal_hz");
    f.delta_f_max_hz = q.at("delta_f_max_hz");
    f.delta_f_ss_hz = q.at("delta_f_ss_hz");
    f.t_pfr_s = q.at("t_pfr_s");
    f.t_efr_s = q.at("t_efr_s");
    f.infeed_loss_mw = q.at("infeed_loss_mw");
    f.damping_per_hz = q.at("damping_per_hz");
    efr = j.at("efr_mw");
  } catch (const json::exception& e) {
    throw InputError("summary.json: " + std::string(e.what()));
  }

  std::ifstream csv(dir / "hourly.csv");
  if (!csv) throw InputError("missing " + (dir / "hourly.csv").string());
  std::string line;
  std::getline(csv, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
  }
  const auto col = [&header](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError("hourly.csv lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_hour = col("hour"), c_h = col("inertia_mva_s"),
                    c_d = col("damping_demand_mw"), c_p = col("pfr_req_mw"),
                    c_s = col("sfr_req_mw");

  VerifyOutcome v;
  int row = 1;
  while (std::getline(csv, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    const auto num = [&](std::size_t c) {
      try {
        return std::stod(cells.at(c));
      } catch (const std::exception&) {
        throw InputError("hourly.csv row " + std::to_string(row) + ": bad value in " +
                         header[c]);
      }
    };
    HourlyResult h;
    h.hour = static_cast<int>(num(c_hour)) - 1;
    h.inertia_mva_s = num(c_h);
    h.damping_demand_mw = num(c_d);
    h.pfr_req_mw = num(c_p);
    h.sfr_req_mw = num(c_s);
    const auto report = check_compliance(
        simulate(portfolio_for_hour(f, efr, h), dt_s, t_end_s), f.delta_f_max_hz,
        f.delta_f_ss_hz);
    ++v.hours;
    if (!report.pass) {
      ++v.failures;
      v.messages.push_back("hour " + std::to_string(h.hour + 1) + ": " + report.message);
    }
  }
  return v;
}

}  // namespace fruc
