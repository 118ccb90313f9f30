#include "fruc/system_model.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fruc {

namespace {

constexpr const char* kProfileHeader =
    "period,demand_mw,wind_mw,solar_mw,interconnector_mw";

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::optional<double> parse_double(const std::string& field) {
  const std::string text = trim(field);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string to_string(Technology tech) {
  switch (tech) {
    case Technology::Nuclear: return "nuclear";
    case Technology::Coal: return "coal";
    case Technology::Ccgt: return "ccgt";
    case Technology::Ocgt: return "ocgt";
  }
  return "unknown";
}

Technology technology_from_string(const std::string& text) {
  if (text == "nuclear") return Technology::Nuclear;
  if (text == "coal") return Technology::Coal;
  if (text == "ccgt") return Technology::Ccgt;
  if (text == "ocgt") return Technology::Ocgt;
  throw InputError("unknown technology '" + text + "'");
}

TimeSeriesProfile TimeSeriesProfile::slice(int first, int count) const {
  if (first < 0 || count < 0 || first + count > horizon())
    throw std::out_of_range("profile slice outside horizon");
  TimeSeriesProfile out;
  out.demand_mw = demand_mw.segment(first, count);
  out.wind_mw = wind_mw.segment(first, count);
  out.solar_mw = solar_mw.segment(first, count);
  out.interconnector_mw = interconnector_mw.segment(first, count);
  return out;
}

double Scenario::damping_demand(int t) const {
  if (freq.damping_mode == DampingDemandMode::Hourly)
    return profile.demand_mw(t);
  if (freq.damping_reference_mw) return *freq.damping_reference_mw;
  return profile.horizon() > 0 ? profile.demand_mw.mean() : 0.0;
}

TimeSeriesProfile load_profiles(const std::filesystem::path& path,
                                int horizon) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file " + path.string());
  if (horizon < 0) throw InputError("negative horizon");

  std::string line;
  if (!std::getline(in, line) || trim(line) != kProfileHeader)
    throw InputError(path.string() + ": header must be exactly '" +
                     kProfileHeader + "'");

  std::vector<double> columns[4];
  int row = 0;
  while (static_cast<int>(columns[0].size()) < horizon &&
         std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_csv_line(trim(line));
    if (fields.size() != 5)
      throw InputError(path.string() + ": row " + std::to_string(row) +
                       ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    if (!parse_double(fields[0]))
      throw InputError(path.string() + ": row " + std::to_string(row) +
                       ": malformed period");
    for (int c = 0; c < 4; ++c) {
      const auto value = parse_double(fields[c + 1]);
      if (!value)
        throw InputError(path.string() + ": row " + std::to_string(row) +
                         ": malformed value in column " +
                         std::to_string(c + 2));
      // The interconnector column is signed.
      if (c < 3 && *value < 0.0)
        throw InputError(path.string() + ": row " + std::to_string(row) +
                         ": negative value in nonnegative column " +
                         std::to_string(c + 2));
      columns[c].push_back(*value);
    }
  }
  if (static_cast<int>(columns[0].size()) < horizon)
    throw InputError(path.string() + ": expected " + std::to_string(horizon) +
                     " rows, found " + std::to_string(columns[0].size()));

  const auto to_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()))
        .eval();
  };
  TimeSeriesProfile profile;
  profile.demand_mw = to_vec(columns[0]);
  profile.wind_mw = to_vec(columns[1]);
  profile.solar_mw = to_vec(columns[2]);
  profile.interconnector_mw = to_vec(columns[3]);
  return profile;
}

void write_profiles(const std::filesystem::path& path,
                    const TimeSeriesProfile& profile) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write profile file " + path.string());
  out.precision(17);
  out << kProfileHeader << '\n';
  for (int t = 0; t < profile.horizon(); ++t)
    out << t + 1 << ',' << profile.demand_mw(t) << ',' << profile.wind_mw(t)
        << ',' << profile.solar_mw(t) << ',' << profile.interconnector_mw(t)
        << '\n';
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  const auto fail = [&out](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };

  // Names end up inside solver variable names.
  const auto bad_identifier = [](const std::string& n) {
    if (n.empty() || std::isdigit(static_cast<unsigned char>(n[0]))) return true;
    return !std::all_of(n.begin(), n.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  };
  if (s.start_day_of_year < 0 || s.start_day_of_year > 365)
    fail("start_day_of_year", "start_day_of_year must be in [0, 365]");

  for (const auto& g : s.groups) {
    const std::string p = "groups." + g.name + ".";
    if (g.name.empty()) fail("groups", "group with empty name");
    else if (bad_identifier(g.name))
      fail(p + "name", "names may only use letters, digits and '_'");
    if (g.n_units < 1) fail(p + "n_units", "n_units must be at least 1");
    if (g.unit_capacity_mw <= 0.0)
      fail(p + "unit_capacity_mw", "capacity must be positive");
    if (g.msg_mw < 0.0) fail(p + "msg_mw", "msg must be nonnegative");
    if (g.msg_mw > g.unit_capacity_mw)
      fail(p + "msg_mw", "msg exceeds capacity");
    if (g.startup_time_h < 0 || g.shutdown_time_h < 0)
      fail(p + "startup_time_h", "start-up/shut-down times must be >= 0");
    if (g.governor_slope < 0.0 || g.governor_slope > 1.0)
      fail(p + "governor_slope", "governor slope must lie in [0, 1]");
    if (g.inertia_constant_s < 0.0)
      fail(p + "inertia_constant_s", "inertia constant must be >= 0");
    if (g.marginal_cost < 0.0 || g.no_load_cost < 0.0 || g.startup_cost < 0.0)
      fail(p + "costs", "costs must be nonnegative");
    if (g.ramp_up_mw_per_h < 0.0 || g.ramp_down_mw_per_h < 0.0)
      fail(p + "ramp", "ramp rates must be nonnegative");
    if (g.pfr_max_mw < 0.0 || g.sfr_max_mw < 0.0)
      fail(p + "fr_max", "response limits must be nonnegative");
  }

  for (const auto& st : s.storage) {
    const std::string p = "storage." + st.name + ".";
    if (bad_identifier(st.name))
      fail(p + "name", "names may only use letters, digits and '_'");
    if (st.e_min_mwh > st.e_initial_mwh || st.e_initial_mwh > st.e_max_mwh)
      fail(p + "e_initial_mwh", "initial energy outside [e_min, e_max]");
    if (st.p_charge_max_mw < 0.0 || st.p_discharge_max_mw < 0.0)
      fail(p + "power", "charge/discharge limits must be nonnegative");
    if (!(st.efficiency > 0.0 && st.efficiency <= 1.0))
      fail(p + "efficiency", "efficiency must lie in (0, 1]");
    if (st.fr_max_mw < 0.0) fail(p + "fr_max_mw", "fr_max must be >= 0");
  }

  std::vector<std::string> names;
  for (const auto& g : s.groups) names.push_back(g.name);
  for (const auto& st : s.storage) names.push_back(st.name);
  std::sort(names.begin(), names.end());
  for (std::size_t i = 1; i < names.size(); ++i)
    if (names[i] == names[i - 1] && (i < 2 || names[i - 2] != names[i]))
      fail("names", "duplicate group/storage name '" + names[i] + "'");

  const auto& pr = s.profile;
  const int T = pr.horizon();
  if (T < 1) fail("profile", "horizon must be at least one hour");
  if (pr.wind_mw.size() != T || pr.solar_mw.size() != T ||
      pr.interconnector_mw.size() != T) {
    fail("profile", "series lengths differ");
  } else if (T > 0) {
    if (pr.demand_mw.minCoeff() < 0.0) fail("profile.demand_mw", "negative demand");
    if (pr.wind_mw.minCoeff() < 0.0) fail("profile.wind_mw", "negative wind");
    if (pr.solar_mw.minCoeff() < 0.0) fail("profile.solar_mw", "negative solar");

    double capacity = 0.0;
    for (const auto& g : s.groups) capacity += g.unit_capacity_mw * g.n_units;
    for (const auto& st : s.storage) capacity += st.p_discharge_max_mw;
    const Eigen::VectorXd supply = (pr.wind_mw + pr.solar_mw + pr.interconnector_mw)
                                       .array() + capacity;
    for (int t = 0; t < T; ++t) {
      if (pr.demand_mw(t) > supply(t)) {
        fail("profile.demand_mw", "demand exceeds total available supply at hour " +
                                      std::to_string(t + 1));
        break;
      }
    }
  }

  const auto& f = s.freq;
  if (!(f.f_nominal_hz > 0.0)) fail("frequency.f_nominal_hz", "must be positive");
  if (!(f.delta_f_ss_hz > 0.0)) fail("frequency.delta_f_ss_hz", "must be positive");
  if (f.delta_f_ss_hz > f.delta_f_max_hz)
    fail("frequency.delta_f_ss_hz", "delta_f_ss exceeds delta_f_max");
  if (!(f.delta_f_max_hz < f.f_nominal_hz))
    fail("frequency.delta_f_max_hz", "must be below nominal frequency");
  if (!(f.t_efr_s > 0.0 && f.t_efr_s < f.t_pfr_s))
    fail("frequency.t_efr_s", "need 0 < t_efr < t_pfr");
  if (f.efr_mw < 0.0) fail("frequency.efr_mw", "must be >= 0");
  if (!(f.infeed_loss_mw > 0.0)) fail("frequency.infeed_loss_mw", "must be positive");
  if (f.damping_per_hz < 0.0) fail("frequency.damping_per_hz", "must be >= 0");
  if (f.load_inertia_s < 0.0) fail("frequency.load_inertia_s", "must be >= 0");
  if (f.damping_reference_mw && *f.damping_reference_mw < 0.0)
    fail("frequency.damping_reference_mw", "must be >= 0");

  if (s.initial_state.size() != s.groups.size()) {
    fail("initial_state", "one initial state per group required");
  } else {
    for (std::size_t i = 0; i < s.groups.size(); ++i) {
      const auto& g = s.groups[i];
      const auto& init = s.initial_state[i];
      const std::string p = "groups." + g.name + ".initial";
      if (init.units_online < 0 || init.units_online > g.n_units)
        fail(p, "initial units online outside [0, n_units]");
      if (g.must_run() && init.units_online != g.n_units)
        fail(p, "must-run group must start fully online");
      const double lo = init.units_online * g.msg_mw;
      const double hi = init.units_online * g.unit_capacity_mw;
      if (init.output_mw < lo - 1e-9 || init.output_mw > hi + 1e-9)
        fail(p, "initial output outside MSG/capacity bounds");
    }
  }
  return out;
}

GeneratorGroup table_one_group(Technology tech, int n_units) {
  GeneratorGroup g;
  g.name = to_string(tech);
  g.technology = tech;
  g.n_units = n_units;
  switch (tech) {
    case Technology::Nuclear:
      g.unit_capacity_mw = 1800; g.startup_cost = 50548; g.marginal_cost = 7.1;
      g.no_load_cost = 0; g.msg_mw = 1800; g.startup_time_h = 0;
      g.shutdown_time_h = 0; g.governor_slope = 0; g.inertia_constant_s = 4;
      g.ramp_down_mw_per_h = 0; g.ramp_up_mw_per_h = 0;
      g.pfr_max_mw = 0; g.sfr_max_mw = 0;
      break;
    case Technology::Coal:
      g.unit_capacity_mw = 500; g.startup_cost = 21001; g.marginal_cost = 19.8;
      g.no_load_cost = 2071; g.msg_mw = 200; g.startup_time_h = 4;
      g.shutdown_time_h = 4; g.governor_slope = 0.3; g.inertia_constant_s = 6;
      g.ramp_down_mw_per_h = 240; g.ramp_up_mw_per_h = 200;
      g.pfr_max_mw = 40; g.sfr_max_mw = 60;
      break;
    case Technology::Ccgt:
      g.unit_capacity_mw = 500; g.startup_cost = 12564; g.marginal_cost = 18.93;
      g.no_load_cost = 2476; g.msg_mw = 200; g.startup_time_h = 2;
      g.shutdown_time_h = 2; g.governor_slope = 0.4; g.inertia_constant_s = 6;
      g.ramp_down_mw_per_h = 360; g.ramp_up_mw_per_h = 360;
      g.pfr_max_mw = 60; g.sfr_max_mw = 80;
      break;
    case Technology::Ocgt:
      // MSG is not applicable to OCGT; modelled as zero.
      g.unit_capacity_mw = 200; g.startup_cost = 0; g.marginal_cost = 39.54;
      g.no_load_cost = 4809; g.msg_mw = 0; g.startup_time_h = 0;
      g.shutdown_time_h = 0; g.governor_slope = 0.6; g.inertia_constant_s = 6;
      g.ramp_down_mw_per_h = 200; g.ramp_up_mw_per_h = 200;
      g.pfr_max_mw = 60; g.sfr_max_mw = 100;
      break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// YAML config

namespace {

template <typename T>
T get_or(const YAML::Node& node, const char* key, T fallback) {
  const auto child = node[key];
  if (!child) return fallback;
  try {
    return child.as<T>();
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const YAML::Node& node, const char* key, const std::string& where) {
  const auto child = node[key];
  if (!child) throw InputError(where + ": missing required key '" + key + "'");
  try {
    return child.as<T>();
  } catch (const YAML::Exception& e) {
    throw InputError(where + "." + key + ": " + e.what());
  }
}

Eigen::VectorXd read_series(const YAML::Node& node, const char* key,
                            std::optional<int> length) {
  const auto child = node[key];
  if (!child) {
    if (length) return Eigen::VectorXd::Zero(*length);
    throw InputError(std::string("profile: missing series '") + key + "'");
  }
  const auto values = child.as<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(
             values.data(), static_cast<Eigen::Index>(values.size()))
      .eval();
}

GeneratorGroup parse_group(const YAML::Node& node) {
  const auto tech =
      technology_from_string(require<std::string>(node, "technology", "group"));
  GeneratorGroup g = table_one_group(tech, 1);
  g.name = require<std::string>(node, "name", "group");
  const std::string where = "groups." + g.name;
  g.n_units = require<int>(node, "n_units", where);
  g.unit_capacity_mw = get_or(node, "unit_capacity_mw", g.unit_capacity_mw);
  g.marginal_cost = get_or(node, "marginal_cost", g.marginal_cost);
  g.no_load_cost = get_or(node, "no_load_cost", g.no_load_cost);
  g.startup_cost = get_or(node, "startup_cost", g.startup_cost);
  g.msg_mw = get_or(node, "msg_mw", g.msg_mw);
  g.startup_time_h = get_or(node, "startup_time_h", g.startup_time_h);
  g.shutdown_time_h = get_or(node, "shutdown_time_h", g.shutdown_time_h);
  g.ramp_up_mw_per_h = get_or(node, "ramp_up_mw_per_h", g.ramp_up_mw_per_h);
  g.ramp_down_mw_per_h =
      get_or(node, "ramp_down_mw_per_h", g.ramp_down_mw_per_h);
  g.governor_slope = get_or(node, "governor_slope", g.governor_slope);
  g.inertia_constant_s =
      get_or(node, "inertia_constant_s", g.inertia_constant_s);
  // Response caps have no published defaults and must be given.
  g.pfr_max_mw = require<double>(node, "pfr_max_mw", where);
  g.sfr_max_mw = require<double>(node, "sfr_max_mw", where);
  return g;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text,
                        const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  if (!root.IsMap()) throw InputError("config root must be a mapping");

  Scenario s;
  s.name = get_or<std::string>(root, "name", "scenario");
  s.start_day_of_year = get_or<int>(root, "start_day_of_year", 0);

  const auto groups = root["groups"];
  if (!groups || !groups.IsSequence())
    throw InputError("config: 'groups' must be a list");
  for (const auto& node : groups) {
    s.groups.push_back(parse_group(node));
    const auto& g = s.groups.back();
    InitialGroupState init;
    init.units_online = get_or(node, "initial_units_online",
                               g.must_run() ? g.n_units : 0);
    init.output_mw = get_or(node, "initial_output_mw",
                            g.must_run() ? g.n_units * g.unit_capacity_mw : 0.0);
    s.initial_state.push_back(init);
  }

  if (const auto storage = root["storage"]) {
    for (const auto& node : storage) {
      StorageUnit st;
      st.name = require<std::string>(node, "name", "storage");
      const std::string where = "storage." + st.name;
      st.e_max_mwh = require<double>(node, "e_max_mwh", where);
      st.e_min_mwh = get_or(node, "e_min_mwh", 0.0);
      st.p_charge_max_mw = require<double>(node, "p_charge_max_mw", where);
      st.p_discharge_max_mw = require<double>(node, "p_discharge_max_mw", where);
      st.efficiency = get_or(node, "efficiency", 0.866);
      st.fr_max_mw = get_or(node, "fr_max_mw", 0.0);
      st.e_initial_mwh = get_or(node, "e_initial_mwh", st.e_min_mwh);
      s.storage.push_back(st);
    }
  }

  const auto profile = root["profile"];
  if (!profile) throw InputError("config: missing 'profile'");
  if (const auto csv = profile["csv"]) {
    std::filesystem::path path = csv.as<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    const int horizon = require<int>(profile, "horizon", "profile");
    s.profile = load_profiles(path, horizon);
    s.profile_path = path;
  } else {
    s.profile.demand_mw = read_series(profile, "demand_mw", std::nullopt);
    const int T = static_cast<int>(s.profile.demand_mw.size());
    s.profile.wind_mw = read_series(profile, "wind_mw", T);
    s.profile.solar_mw = read_series(profile, "solar_mw", T);
    s.profile.interconnector_mw = read_series(profile, "interconnector_mw", T);
    if (const auto h = profile["horizon"]) {
      const int horizon = h.as<int>();
      if (horizon > T) throw InputError("profile: horizon exceeds series length");
      s.profile = s.profile.slice(0, horizon);
    }
  }

  if (const auto f = root["frequency"]) {
    auto& q = s.freq;
    q.f_nominal_hz = get_or(f, "f_nominal_hz", q.f_nominal_hz);
    q.delta_f_max_hz = get_or(f, "delta_f_max_hz", q.delta_f_max_hz);
    q.delta_f_ss_hz = get_or(f, "delta_f_ss_hz", q.delta_f_ss_hz);
    q.t_pfr_s = get_or(f, "t_pfr_s", q.t_pfr_s);
    q.t_efr_s = get_or(f, "t_efr_s", q.t_efr_s);
    q.efr_mw = get_or(f, "efr_mw", q.efr_mw);
    q.infeed_loss_mw = get_or(f, "infeed_loss_mw", q.infeed_loss_mw);
    q.damping_per_hz = get_or(f, "damping_per_hz", q.damping_per_hz);
    q.load_inertia_s = get_or(f, "load_inertia_s", q.load_inertia_s);
    const auto mode = get_or<std::string>(f, "damping_mode", "constant_reference");
    if (mode == "constant_reference")
      q.damping_mode = DampingDemandMode::ConstantReference;
    else if (mode == "hourly")
      q.damping_mode = DampingDemandMode::Hourly;
    else
      throw InputError("frequency.damping_mode: unknown mode '" + mode + "'");
    if (const auto ref = f["damping_reference_mw"])
      q.damping_reference_mw = ref.as<double>();
    q.qss_includes_efr = get_or(f, "qss_includes_efr", q.qss_includes_efr);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.parent_path());
}

std::string serialize_scenario(const Scenario& s, bool reference_profile_csv) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "start_day_of_year" << YAML::Value << s.start_day_of_year;

  out << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
  if (reference_profile_csv && s.profile_path) {
    out << YAML::Key << "csv" << YAML::Value << s.profile_path->string();
    out << YAML::Key << "horizon" << YAML::Value << s.horizon();
  } else {
    const auto emit = [&out](const char* key, const Eigen::VectorXd& v) {
      out << YAML::Key << key << YAML::Value << YAML::Flow
          << std::vector<double>(v.data(), v.data() + v.size());
    };
    emit("demand_mw", s.profile.demand_mw);
    emit("wind_mw", s.profile.wind_mw);
    emit("solar_mw", s.profile.solar_mw);
    emit("interconnector_mw", s.profile.interconnector_mw);
  }
  out << YAML::EndMap;

  const auto& q = s.freq;
  out << YAML::Key << "frequency" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "f_nominal_hz" << YAML::Value << q.f_nominal_hz;
  out << YAML::Key << "delta_f_max_hz" << YAML::Value << q.delta_f_max_hz;
  out << YAML::Key << "delta_f_ss_hz" << YAML::Value << q.delta_f_ss_hz;
  out << YAML::Key << "t_pfr_s" << YAML::Value << q.t_pfr_s;
  out << YAML::Key << "t_efr_s" << YAML::Value << q.t_efr_s;
  out << YAML::Key << "efr_mw" << YAML::Value << q.efr_mw;
  out << YAML::Key << "infeed_loss_mw" << YAML::Value << q.infeed_loss_mw;
  out << YAML::Key << "damping_per_hz" << YAML::Value << q.damping_per_hz;
  out << YAML::Key << "load_inertia_s" << YAML::Value << q.load_inertia_s;
  out << YAML::Key << "damping_mode" << YAML::Value
      << (q.damping_mode == DampingDemandMode::Hourly ? "hourly"
                                                      : "constant_reference");
  if (q.damping_reference_mw)
    out << YAML::Key << "damping_reference_mw" << YAML::Value
        << *q.damping_reference_mw;
  out << YAML::Key << "qss_includes_efr" << YAML::Value << q.qss_includes_efr;
  out << YAML::EndMap;

  out << YAML::Key << "groups" << YAML::Value << YAML::BeginSeq;
  for (std::size_t i = 0; i < s.groups.size(); ++i) {
    const auto& g = s.groups[i];
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << g.name;
    out << YAML::Key << "technology" << YAML::Value << to_string(g.technology);
    out << YAML::Key << "n_units" << YAML::Value << g.n_units;
    out << YAML::Key << "unit_capacity_mw" << YAML::Value << g.unit_capacity_mw;
    out << YAML::Key << "marginal_cost" << YAML::Value << g.marginal_cost;
    out << YAML::Key << "no_load_cost" << YAML::Value << g.no_load_cost;
    out << YAML::Key << "startup_cost" << YAML::Value << g.startup_cost;
    out << YAML::Key << "msg_mw" << YAML::Value << g.msg_mw;
    out << YAML::Key << "startup_time_h" << YAML::Value << g.startup_time_h;
    out << YAML::Key << "shutdown_time_h" << YAML::Value << g.shutdown_time_h;
    out << YAML::Key << "ramp_up_mw_per_h" << YAML::Value << g.ramp_up_mw_per_h;
    out << YAML::Key << "ramp_down_mw_per_h" << YAML::Value
        << g.ramp_down_mw_per_h;
    out << YAML::Key << "governor_slope" << YAML::Value << g.governor_slope;
    out << YAML::Key << "inertia_constant_s" << YAML::Value
        << g.inertia_constant_s;
    out << YAML::Key << "pfr_max_mw" << YAML::Value << g.pfr_max_mw;
    out << YAML::Key << "sfr_max_mw" << YAML::Value << g.sfr_max_mw;
    if (i < s.initial_state.size()) {
      out << YAML::Key << "initial_units_online" << YAML::Value
          << s.initial_state[i].units_online;
      out << YAML::Key << "initial_output_mw" << YAML::Value
          << s.initial_state[i].output_mw;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "storage" << YAML::Value << YAML::BeginSeq;
  for (const auto& st : s.storage) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << st.name;
    out << YAML::Key << "e_max_mwh" << YAML::Value << st.e_max_mwh;
    out << YAML::Key << "e_min_mwh" << YAML::Value << st.e_min_mwh;
    out << YAML::Key << "p_charge_max_mw" << YAML::Value << st.p_charge_max_mw;
    out << YAML::Key << "p_discharge_max_mw" << YAML::Value
        << st.p_discharge_max_mw;
    out << YAML::Key << "efficiency" << YAML::Value << st.efficiency;
    out << YAML::Key << "fr_max_mw" << YAML::Value << st.fr_max_mw;
    out << YAML::Key << "e_initial_mwh" << YAML::Value << st.e_initial_mwh;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fruc
