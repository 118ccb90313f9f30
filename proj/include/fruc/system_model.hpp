#ifndef FRUC_SYSTEM_MODEL_HPP
#define FRUC_SYSTEM_MODEL_HPP

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fruc {

enum class Technology { Nuclear, Coal, Ccgt, Ocgt };

std::string to_string(Technology tech);
Technology technology_from_string(const std::string& text);

/// Aggregated group of identical thermal units of one technology.
///
/// Ramp rates, MSG and frequency-response caps are per unit; the group
/// quantities scale with the number of units online.
struct GeneratorGroup {
  std::string name;
  Technology technology = Technology::Ccgt;
  double unit_capacity_mw = 0.0;
  int n_units = 1;
  double marginal_cost = 0.0;  // GBP/MWh
  double no_load_cost = 0.0;   // GBP/h per online unit
  double startup_cost = 0.0;   // GBP per start
  double msg_mw = 0.0;
  int startup_time_h = 0;
  int shutdown_time_h = 0;
  double ramp_up_mw_per_h = 0.0;
  double ramp_down_mw_per_h = 0.0;
  double governor_slope = 0.0;
  double inertia_constant_s = 0.0;
  double pfr_max_mw = 0.0;
  double sfr_max_mw = 0.0;

  bool must_run() const { return technology == Technology::Nuclear; }
};

/// Pumped-hydro style storage. `efficiency` is one-way: charging stores
/// efficiency * P, discharging P drains P / efficiency.
struct StorageUnit {
  std::string name;
  double e_max_mwh = 0.0;
  double e_min_mwh = 0.0;
  double p_charge_max_mw = 0.0;
  double p_discharge_max_mw = 0.0;
  double efficiency = 1.0;
  double fr_max_mw = 0.0;
  double e_initial_mwh = 0.0;
};

/// Hourly exogenous series. Interconnector flow is signed, import positive.
struct TimeSeriesProfile {
  Eigen::VectorXd demand_mw;
  Eigen::VectorXd wind_mw;
  Eigen::VectorXd solar_mw;
  Eigen::VectorXd interconnector_mw;

  int horizon() const { return static_cast<int>(demand_mw.size()); }

  /// Hours [first, first + count).
  TimeSeriesProfile slice(int first, int count) const;
};

enum class DampingDemandMode { ConstantReference, Hourly };

struct FrequencyParams {
  double f_nominal_hz = 50.0;
  double delta_f_max_hz = 0.8;   // nadir deviation bound
  double delta_f_ss_hz = 0.5;    // quasi-steady-state deviation bound
  double t_pfr_s = 10.0;
  double t_efr_s = 1.0;
  double efr_mw = 0.0;
  double infeed_loss_mw = 1320.0;
  double damping_per_hz = 0.01;
  double load_inertia_s = 1.0;
  DampingDemandMode damping_mode = DampingDemandMode::ConstantReference;
  /// Reference demand for ConstantReference mode. Unset means the mean
  /// demand of the scenario profile.
  std::optional<double> damping_reference_mw;
  /// Count EFR against the quasi-steady-state requirement as well.
  bool qss_includes_efr = false;
};

struct InitialGroupState {
  int units_online = 0;
  double output_mw = 0.0;
};

struct Scenario {
  std::string name;
  std::vector<GeneratorGroup> groups;
  std::vector<StorageUnit> storage;
  TimeSeriesProfile profile;
  FrequencyParams freq;
  std::vector<InitialGroupState> initial_state;  // one per group
  /// Where the profile was read from, if it came from a CSV file.
  std::optional<std::filesystem::path> profile_path;
  /// Calendar position of hour 0 (0 = 1 January), for season labels.
  int start_day_of_year = 0;

  int horizon() const { return profile.horizon(); }

  /// Demand used in the load-damping term for hour t (0-based).
  double damping_demand(int t) const;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads `period,demand_mw,wind_mw,solar_mw,interconnector_mw` rows and
/// keeps the first `horizon` of them.
TimeSeriesProfile load_profiles(const std::filesystem::path& path,
                                int horizon);

void write_profiles(const std::filesystem::path& path,
                    const TimeSeriesProfile& profile);

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_scenario(const Scenario& scenario);

/// YAML scenario config. A relative `profile.csv` path is resolved against
/// `base_dir`.
Scenario parse_scenario(const std::string& yaml_text,
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Writes the config form of `scenario`. Profiles are emitted inline unless
/// `reference_profile_csv` is set and the scenario has a profile path.
std::string serialize_scenario(const Scenario& scenario,
                               bool reference_profile_csv = false);

/// Table I style parameters for one technology, with the given unit count.
GeneratorGroup table_one_group(Technology tech, int n_units);

}  // namespace fruc

#endif  // FRUC_SYSTEM_MODEL_HPP
