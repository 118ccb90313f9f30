#include "fruc/mip.hpp"

#include <Highs.h>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

extern char** environ;

namespace fruc {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

std::optional<double> Solution::value(std::string_view name) const {
  if (!has_values()) return std::nullopt;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values(static_cast<Eigen::Index>(i));
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> variable_names(const MipModel& m) {
  std::vector<std::string> names;
  names.reserve(m.num_variables());
  for (const auto& v : m.variables()) names.push_back(v.name);
  return names;
}

HighsLp to_highs_lp(const MipModel& m) {
  HighsLp lp;
  lp.num_col_ = m.num_variables();
  lp.num_row_ = m.num_constraints();
  lp.sense_ = ObjSense::kMinimize;
  lp.offset_ = m.objective_offset();
  lp.col_cost_.assign(m.objective().data(),
                      m.objective().data() + m.num_variables());
  lp.col_lower_.resize(lp.num_col_);
  lp.col_upper_.resize(lp.num_col_);
  lp.integrality_.resize(lp.num_col_);
  for (int j = 0; j < m.num_variables(); ++j) {
    const auto& v = m.variable(j);
    lp.col_lower_[j] = v.lower;
    lp.col_upper_[j] = v.upper;
    lp.integrality_[j] = v.kind == VarKind::Integer ? HighsVarType::kInteger
                                                    : HighsVarType::kContinuous;
  }
  if (m.num_integer() == 0) lp.integrality_.clear();
  lp.row_lower_.resize(lp.num_row_);
  lp.row_upper_.resize(lp.num_row_);
  for (int r = 0; r < m.num_constraints(); ++r) {
    const auto& c = m.constraint(r);
    lp.row_lower_[r] = c.sense == Sense::LessEqual ? -kHighsInf : c.rhs;
    lp.row_upper_[r] = c.sense == Sense::GreaterEqual ? kHighsInf : c.rhs;
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor> a = m.constraint_matrix();
  a.makeCompressed();
  lp.a_matrix_.format_ = MatrixFormat::kColwise;
  lp.a_matrix_.num_col_ = lp.num_col_;
  lp.a_matrix_.num_row_ = lp.num_row_;
  lp.a_matrix_.start_.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.cols() + 1);
  lp.a_matrix_.index_.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
  lp.a_matrix_.value_.assign(a.valuePtr(), a.valuePtr() + a.nonZeros());
  return lp;
}

SolveStatus map_status(HighsModelStatus status, bool has_primal) {
  switch (status) {
    case HighsModelStatus::kOptimal: return SolveStatus::Optimal;
    case HighsModelStatus::kInfeasible: return SolveStatus::Infeasible;
    case HighsModelStatus::kUnbounded: return SolveStatus::Unbounded;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
      return has_primal ? SolveStatus::Feasible : SolveStatus::Error;
    default: return SolveStatus::Error;
  }
}

}  // namespace

Solution HighsBackend::solve_raw(const MipModel& model,
                                 const SolveOptions& options) const {
  const auto start = Clock::now();
  Highs highs;
  highs.setOptionValue("output_flag", options.verbose);
  highs.setOptionValue("mip_rel_gap", options.gap_tolerance);
  highs.setOptionValue("time_limit", options.time_limit_s);
  highs.setOptionValue("primal_feasibility_tolerance", 1e-9);
  highs.setOptionValue("mip_feasibility_tolerance", 1e-7);

  Solution sol;
  sol.names = variable_names(model);
  if (highs.passModel(to_highs_lp(model)) == HighsStatus::kError) {
    sol.detail = "HiGHS rejected the model";
    sol.wall_time_s = seconds_since(start);
    return sol;
  }
  highs.run();
  auto status = highs.getModelStatus();
  if (status == HighsModelStatus::kUnboundedOrInfeasible) {
    // Presolve cannot tell the two apart; the simplex can.
    highs.setOptionValue("presolve", "off");
    highs.run();
    status = highs.getModelStatus();
  }
  const auto& info = highs.getInfo();
  const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;
  sol.status = map_status(status, has_primal);
  sol.detail = highs.modelStatusToString(status);
  if (sol.has_values()) {
    const auto& x = highs.getSolution().col_value;
    sol.values = Eigen::Map<const Eigen::VectorXd>(x.data(), model.num_variables());
    sol.objective = info.objective_function_value;
    sol.mip_gap = model.num_integer() > 0 ? info.mip_gap : 0.0;
  } else if (status == HighsModelStatus::kUnboundedOrInfeasible) {
    sol.status = SolveStatus::Infeasible;
  }
  sol.wall_time_s = seconds_since(start);
  return sol;
}

// ---------------------------------------------------------------------------
// Subprocess backend

SubprocessBackend::SubprocessBackend(SubprocessConfig config)
    : config_(std::move(config)) {
  if (config_.executable.empty())
    throw SolverUnavailable("subprocess backend needs a solver executable");
}

namespace {

std::string replace_all(std::string text, const std::string& from,
                        const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size()))
    text.replace(pos, from.size(), to);
  return text;
}

SolveStatus status_from_highs_text(const std::string& text, bool has_primal) {
  if (text == "Optimal") return SolveStatus::Optimal;
  if (text == "Infeasible" || text == "Primal infeasible or unbounded")
    return SolveStatus::Infeasible;
  if (text == "Unbounded") return SolveStatus::Unbounded;
  if (text == "Empty") return SolveStatus::Optimal;
  if (text == "Time limit reached" || text == "Iteration limit reached" ||
      text == "Solution limit reached" || text == "Interrupted by user")
    return has_primal ? SolveStatus::Feasible : SolveStatus::Error;
  return SolveStatus::Error;
}

int run_process(const std::filesystem::path& exe,
                const std::vector<std::string>& args,
                const std::filesystem::path& log_path) {
  std::vector<std::string> argv_store;
  argv_store.push_back(exe.string());
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  const std::string log = log_path.string();
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

  pid_t pid = 0;
  const int rc =
      posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return -1;
  int wstatus = 0;
  if (waitpid(pid, &wstatus, 0) < 0) return -1;
  return WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
}

}  // namespace

Solution parse_highs_solution(std::string_view text, const MipModel& model) {
  Solution sol;
  sol.names = variable_names(model);
  std::istringstream in{std::string(text)};
  std::string line;
  std::string model_status;
  while (std::getline(in, line)) {
    if (line == "Model status") {
      std::getline(in, model_status);
      break;
    }
  }
  if (model_status.empty()) {
    sol.detail = "solution file has no model status";
    return sol;
  }
  sol.detail = model_status;

  bool has_primal = false;
  while (std::getline(in, line)) {
    if (line != "# Primal solution values") continue;
    std::string feasibility;
    std::getline(in, feasibility);
    if (feasibility != "Feasible") break;
    has_primal = true;
    std::string word;
    if (!(in >> word >> sol.objective) || word != "Objective") {
      sol.detail = "malformed objective line";
      return sol;
    }
    std::string hash, columns;
    int count = 0;
    if (!(in >> hash >> columns >> count) || columns != "Columns" ||
        count != model.num_variables()) {
      sol.detail = "column count mismatch in solution file";
      return sol;
    }
    sol.values = Eigen::VectorXd::Constant(count, std::nan(""));
    for (int i = 0; i < count; ++i) {
      std::string name;
      double value = 0.0;
      if (!(in >> name >> value)) {
        sol.detail = "truncated column section";
        sol.values.resize(0);
        return sol;
      }
      const auto idx = model.find_variable(name);
      if (!idx) {
        sol.detail = "unknown column '" + name + "' in solution file";
        sol.values.resize(0);
        return sol;
      }
      sol.values(*idx) = value;
    }
    break;
  }
  sol.status = status_from_highs_text(model_status, has_primal);
  if (!sol.has_values()) sol.values.resize(0);
  return sol;
}

Solution SubprocessBackend::solve_raw(const MipModel& model,
                                      const SolveOptions& options) const {
  static std::atomic<int> counter{0};
  const auto start = Clock::now();
  const auto dir = config_.work_dir.empty()
                       ? std::filesystem::temp_directory_path()
                       : config_.work_dir;
  std::filesystem::create_directories(dir);
  const std::string stem = "fruc_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter++);
  const auto model_path =
      dir / (stem + (config_.format == ExportFormat::Lp ? ".lp" : ".mps"));
  const auto solution_path = dir / (stem + ".sol");
  const auto log_path = dir / (stem + ".log");
  {
    std::ofstream out(model_path);
    out << export_model(model, config_.format);
  }

  std::vector<std::string> args;
  for (const auto& a : config_.arguments) {
    std::string arg = replace_all(a, "{model}", model_path.string());
    arg = replace_all(arg, "{solution}", solution_path.string());
    arg = replace_all(arg, "{time_limit}", std::to_string(options.time_limit_s));
    arg = replace_all(arg, "{gap}", std::to_string(options.gap_tolerance));
    args.push_back(arg);
  }
  const int rc = run_process(config_.executable, args, log_path);

  Solution sol;
  std::ifstream in(solution_path);
  if (rc < 0) {
    sol.names = variable_names(model);
    sol.detail = "failed to launch " + config_.executable.string();
  } else if (!in) {
    sol.names = variable_names(model);
    sol.detail = "solver exited with code " + std::to_string(rc) +
                 " and wrote no solution file";
  } else {
    std::stringstream buffer;
    buffer << in.rdbuf();
    sol = parse_highs_solution(buffer.str(), model);
  }
  if (!config_.keep_files) {
    std::error_code ec;
    std::filesystem::remove(model_path, ec);
    std::filesystem::remove(solution_path, ec);
    std::filesystem::remove(log_path, ec);
  }
  sol.wall_time_s = seconds_since(start);
  return sol;
}

std::unique_ptr<SolverBackend> make_backend(
    const std::string& name,
    const std::optional<std::filesystem::path>& solver_path) {
  if (name == "highs") return std::make_unique<HighsBackend>();
  if (name == "subprocess") {
    SubprocessConfig config;
    if (solver_path) {
      config.executable = *solver_path;
    } else if (const char* env = std::getenv(kSolverPathEnv)) {
      config.executable = env;
    } else {
      throw SolverUnavailable(std::string("subprocess backend: no solver path "
                                          "given and $") +
                              kSolverPathEnv + " is unset");
    }
    return std::make_unique<SubprocessBackend>(std::move(config));
  }
  throw SolverUnavailable("unknown solver backend '" + name + "'");
}

Solution solve(const MipModel& model, const SolverBackend& backend,
               const SolveOptions& options) {
  const auto start = Clock::now();
  if (model.num_variables() == 0) {
    // Nothing to hand a solver; rows without terms are plain comparisons.
    Solution sol;
    sol.status = SolveStatus::Optimal;
    sol.objective = model.objective_offset();
    sol.mip_gap = 0.0;
    for (int i = 0; i < model.num_constraints(); ++i) {
      const auto& c = model.constraint(i);
      const bool ok = c.sense == Sense::Equal          ? c.rhs == 0.0
                      : c.sense == Sense::LessEqual    ? 0.0 <= c.rhs
                                                       : 0.0 >= c.rhs;
      if (!ok) sol.status = SolveStatus::Infeasible;
    }
    if (sol.status == SolveStatus::Infeasible) sol.objective = std::nan("");
    sol.detail = "empty model";
    return sol;
  }
  Solution sol = backend.solve_raw(model, options);
  if (!sol.has_values()) {
    sol.values.resize(0);
    sol.wall_time_s = seconds_since(start);
    return sol;
  }

  Eigen::VectorXd x = sol.values;
  for (int j = 0; j < model.num_variables(); ++j)
    if (model.variable(j).kind == VarKind::Integer) x(j) = std::round(x(j));

  const int n_int = model.num_integer();
  if (options.polish && n_int > 0 && n_int < model.num_variables()) {
    MipModel fixed = model;
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variable(j).kind != VarKind::Integer) continue;
      fixed.set_kind(j, VarKind::Continuous);
      fixed.set_bounds(j, x(j), x(j));
    }
    const Solution lp = backend.solve_raw(fixed, options);
    if (lp.has_values()) {
      x = lp.values;
      for (int j = 0; j < model.num_variables(); ++j)
        if (model.variable(j).kind == VarKind::Integer) x(j) = std::round(x(j));
    } else {
      sol.detail += "; polishing LP failed (" + lp.detail + ")";
    }
  }

  const auto violations = check_feasibility(model, x, 1e-6);
  if (!violations.empty()) {
    sol.status = SolveStatus::Error;
    sol.detail = "returned point violates the model: " + violations.front() +
                 " (" + std::to_string(violations.size()) + " violations)";
    sol.values.resize(0);
    sol.wall_time_s = seconds_since(start);
    return sol;
  }
  sol.values = x;
  sol.objective = model.objective().dot(x) + model.objective_offset();
  sol.wall_time_s = seconds_since(start);
  return sol;
}

}  // namespace fruc
