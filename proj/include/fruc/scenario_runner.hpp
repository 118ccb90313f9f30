#ifndef FRUC_SCENARIO_RUNNER_HPP
#define FRUC_SCENARIO_RUNNER_HPP

#include "fruc/fr_requirements.hpp"
#include "fruc/mip.hpp"
#include "fruc/swing_verifier.hpp"
#include "fruc/system_model.hpp"
#include "fruc/uc_formulation.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fruc {

struct RunOptions {
  std::string solver = "highs";
  std::optional<std::filesystem::path> solver_path;
  SolveOptions solve;
  int window_hours = 168;
  int n_segments = 16;
  /// Also solve the scenario without frequency-response constraints so the
  /// balancing cost can be split out.
  bool compute_balancing = true;
  bool verify = true;
  double verify_dt_s = 0.05;
  /// Long enough for the damped post-SFR settling to reach its steady value.
  double verify_t_end_s = 600.0;
  /// Worker threads for sweep levels and verification; 0 picks the core count.
  int jobs = 0;
};

/// Builds one complete model (UC plus, optionally, the frequency-response
/// layer) for the whole horizon of `scenario`.
struct BuiltModel {
  MipModel model;
  UcVariableIndex index;
  ChordSegmentSet segments;
};
BuiltModel build_model(const Scenario& scenario, bool include_fr, int n_segments,
                       const std::optional<ChordSegmentSet>& segments = std::nullopt);

struct HourlyResult {
  int hour = 0;  // 0-based within the scenario
  double demand_mw = 0.0;
  double wind_mw = 0.0;
  double solar_mw = 0.0;
  double interconnector_mw = 0.0;
  double curtailment_mw = 0.0;
  double damping_demand_mw = 0.0;  // demand the damping terms assumed
  std::vector<double> dispatch_mw;  // per group
  std::vector<int> online;          // per group
  std::vector<int> start_ups;       // per group
  std::vector<double> charge_mw, discharge_mw, energy_mwh;  // per storage
  double inertia_mva_s = 0.0;
  double pfr_req_mw = 0.0;
  double sfr_req_mw = 0.0;
  PfrBinding pfr_binding = PfrBinding::AdequacyFloor;
  int chord_segment = -1;
  std::vector<double> pfr_thermal_mw, sfr_thermal_mw;  // per group
  std::vector<double> pfr_storage_mw, sfr_storage_mw;  // per storage
  double cost = 0.0;
  std::optional<ComplianceReport> verification;
};

struct WindowInfo {
  int first_hour = 0;
  int hours = 0;
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  double mip_gap = 0.0;
  double wall_time_s = 0.0;
};

struct ScenarioResult {
  std::string scenario;
  double efr_mw = 0.0;
  FrequencyParams freq;  // as used, with the damping reference resolved
  std::vector<std::string> group_names;
  std::vector<std::string> storage_names;
  int start_day_of_year = 0;
  std::vector<HourlyResult> hours;
  std::vector<WindowInfo> windows;

  double total_cost = 0.0;      // recomputed from the schedule
  double solver_objective = 0.0;  // sum of window objectives
  bool balancing_computed = false;
  double energy_cost = 0.0;     // cost without frequency-response constraints
  double balancing_cost = 0.0;  // total_cost - energy_cost
  int verification_failures = 0;
  int n_segments = 0;
  std::string solver;

  Eigen::VectorXd column(double HourlyResult::*field) const;
};

class ScenarioInvalid : public std::runtime_error {
 public:
  explicit ScenarioInvalid(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class SolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rolling-window solve of the full model with EFR fixed at `efr_mw`,
/// followed by a swing-equation check of every hour.
ScenarioResult run_scenario(const Scenario& scenario, double efr_mw,
                            const RunOptions& options = {});

/// Cost of the scenario without any frequency-response constraints.
double run_without_fr(const Scenario& scenario, const RunOptions& options = {});

/// Names the earliest hour from which a window cannot be scheduled, with a
/// coarse screen of what is short at that hour.
std::string diagnose_infeasibility(const Scenario& window, const RunOptions& options,
                                   bool include_fr, int hour_offset);

struct SweepRow {
  double efr_mw = 0.0;
  double total_cost = 0.0;
  double mean_pfr_mw = 0.0;
  double mean_sfr_mw = 0.0;
  double abatement = 0.0;      // cost(0) - cost(E)
  double value_per_mw = 0.0;   // abatement / E, 0 at E = 0
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<ScenarioResult> runs;  // one per level, same order
};

/// Levels must be ascending and contain 0.
SweepResult efr_sweep(const Scenario& scenario, const std::vector<double>& levels,
                      const RunOptions& options = {});

enum class Season { Winter, Spring, Summer, Autumn };
std::string to_string(Season season);
/// Meteorological season of a 0-based hour counted from `start_day_of_year`.
Season season_of_hour(int start_day_of_year, int hour);

struct SeasonRow {
  Season season = Season::Winter;
  int hours = 0;
  double mean_inertia_mva_s = 0.0;
  double mean_pfr_without = 0.0;
  double mean_pfr_with = 0.0;
  double pfr_offset = 0.0;
  double mean_sfr_without = 0.0;
  double mean_sfr_with = 0.0;
  double sfr_offset = 0.0;
};

/// Seasons with no hours are omitted.
std::vector<SeasonRow> seasonal_report(const ScenarioResult& without,
                                       const ScenarioResult& with);

struct GridCell {
  double h_lo = 0.0, h_hi = 0.0;
  double d_lo = 0.0, d_hi = 0.0;
  double mean_offset_per_mw = 0.0;
  int count = 0;
};

/// PFR offset per MW of EFR binned over (inertia, demand), inertia taken
/// from the run without EFR.
struct EffectivenessGrid {
  int n_bins = 0;
  Eigen::VectorXd h_edges;  // n_bins + 1
  Eigen::VectorXd d_edges;  // n_bins + 1
  std::vector<GridCell> cells;  // row-major, inertia bin outer
  Eigen::VectorXd hourly_offset_per_mw;
  Eigen::VectorXd hourly_inertia;
  Eigen::VectorXd hourly_demand;
  double inertia_demand_correlation = 0.0;

  const GridCell& cell(int h_bin, int d_bin) const {
    return cells.at(static_cast<std::size_t>(h_bin * n_bins + d_bin));
  }
};

EffectivenessGrid effectiveness_grid(const ScenarioResult& without,
                                     const ScenarioResult& with, double efr_mw,
                                     int n_bins);

/// Per-MW PFR offset of E MW of EFR at fixed inertia, from the nadir constant.
double closed_form_offset_per_mw(const FrequencyParams& freq, double efr_mw,
                                 double inertia);

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Average ranks for ties.
Eigen::VectorXd ranks(const Eigen::VectorXd& x);
double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// One-sided p-value for a correlation at least as negative as observed,
/// from `permutations` random shuffles of y with a fixed seed.
double spearman_negative_p_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 int permutations = 2000, unsigned seed = 12345);

// Output files.
void write_hourly_csv(const std::filesystem::path& path, const ScenarioResult& r);
void write_summary_json(const std::filesystem::path& path, const ScenarioResult& r);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& s);
void write_grid_csv(const std::filesystem::path& path, const EffectivenessGrid& g);
void write_seasonal_csv(const std::filesystem::path& path,
                        const std::vector<SeasonRow>& rows);

/// Re-runs the swing check over a saved result directory
/// (summary.json + hourly.csv).
struct VerifyOutcome {
  int hours = 0;
  int failures = 0;
  std::vector<std::string> messages;
};
VerifyOutcome verify_saved_result(const std::filesystem::path& dir,
                                  double dt_s = 0.05, double t_end_s = 600.0);

ResponsePortfolio portfolio_for_hour(const FrequencyParams& freq, double efr_mw,
                                     const HourlyResult& hour);

/// Command-line entry point. Exit codes: 0 success, 1 invalid input or
/// failed verification, 2 solver failure.
int cli_main(int argc, char** argv);

}  // namespace fruc

#endif  // FRUC_SCENARIO_RUNNER_HPP
