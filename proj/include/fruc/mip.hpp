#ifndef FRUC_MIP_HPP
#define FRUC_MIP_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fruc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Integer };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  int var;
  double coef;
};

/// Sparse affine expression sum(coef * x[var]) + constant.
struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinearExpr() = default;
  LinearExpr(std::initializer_list<Term> t) : terms(t) {}

  LinearExpr& add(int var, double coef) {
    terms.push_back({var, coef});
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator*=(double s);
};

struct Variable {
  std::string name;
  VarKind kind;
  double lower;
  double upper;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // merged, sorted by variable index
  Sense sense;
  double rhs;
};

class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Minimization MIP built incrementally. Variable and constraint names are
/// unique; coefficients always reference existing variables.
class MipModel {
 public:
  int add_variable(std::string name, VarKind kind, double lower, double upper);
  int add_continuous(std::string name, double lower = 0.0,
                     double upper = kInf) {
    return add_variable(std::move(name), VarKind::Continuous, lower, upper);
  }
  int add_integer(std::string name, double lower, double upper) {
    return add_variable(std::move(name), VarKind::Integer, lower, upper);
  }

  /// The expression constant is moved to the right-hand side.
  int add_constraint(std::string name, const LinearExpr& expr, Sense sense,
                     double rhs);

  void add_objective(const LinearExpr& expr);
  void set_objective_coef(int var, double coef);

  void set_bounds(int var, double lower, double upper);
  void set_kind(int var, VarKind kind);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(cons_.size()); }
  int num_integer() const;
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const Variable& variable(int i) const { return vars_.at(i); }
  const Constraint& constraint(int i) const { return cons_.at(i); }
  std::optional<int> find_variable(std::string_view name) const;
  std::optional<int> find_constraint(std::string_view name) const;

  /// Dense objective coefficients, one per variable.
  const Eigen::VectorXd& objective() const { return objective_; }
  double objective_offset() const { return objective_offset_; }

  Eigen::SparseMatrix<double, Eigen::RowMajor> constraint_matrix() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  Eigen::VectorXd objective_;
  double objective_offset_ = 0.0;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> con_index_;
};

double evaluate(const LinearExpr& expr, const Eigen::VectorXd& x);

/// Independent feasibility pass: bounds, rows and integrality against `x`.
/// Returns a description of every violation larger than `tol`.
std::vector<std::string> check_feasibility(const MipModel& model,
                                           const Eigen::VectorXd& x,
                                           double tol = 1e-6);

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { Lp, Mps };

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CPLEX-LP or free-MPS text. Output depends only on the model, so two
/// exports of the same model are byte-identical.
std::string export_model(const MipModel& model, ExportFormat format);

// ---------------------------------------------------------------------------
// Solving

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Error };

std::string to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::Error;
  double objective = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd values;  // empty unless optimal/feasible
  std::vector<std::string> names;
  double wall_time_s = 0.0;
  /// Relative MIP gap; NaN when the backend does not report one.
  double mip_gap = std::numeric_limits<double>::quiet_NaN();
  std::string detail;

  bool has_values() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
  }
  double operator[](int var) const { return values(var); }
  std::optional<double> value(std::string_view name) const;
};

struct SolveOptions {
  double gap_tolerance = 1e-4;
  double time_limit_s = 600.0;
  bool verbose = false;
  /// Re-solve the continuous part with integers fixed at their rounded
  /// values so reported values are consistent to LP tolerance.
  bool polish = true;
};

class SolverUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  /// Raw backend solve, no post-processing.
  virtual Solution solve_raw(const MipModel& model,
                             const SolveOptions& options) const = 0;
};

/// In-process HiGHS.
class HighsBackend final : public SolverBackend {
 public:
  std::string name() const override { return "highs"; }
  Solution solve_raw(const MipModel& model,
                     const SolveOptions& options) const override;
};

/// Runs an external solver executable on an exported model file and parses
/// the HiGHS raw solution file it writes. Argument placeholders:
/// {model} {solution} {time_limit} {gap}.
struct SubprocessConfig {
  std::filesystem::path executable;
  std::vector<std::string> arguments = {
      "--model_file", "{model}",      "--solution_file", "{solution}",
      "--time_limit", "{time_limit}", "--mip_rel_gap",   "{gap}"};
  ExportFormat format = ExportFormat::Mps;
  /// Scratch directory; defaults to the system temp directory.
  std::filesystem::path work_dir;
  bool keep_files = false;
};

class SubprocessBackend final : public SolverBackend {
 public:
  explicit SubprocessBackend(SubprocessConfig config);
  std::string name() const override { return "subprocess"; }
  Solution solve_raw(const MipModel& model,
                     const SolveOptions& options) const override;
  const SubprocessConfig& config() const { return config_; }

 private:
  SubprocessConfig config_;
};

/// Environment variable naming the external solver executable.
inline constexpr const char* kSolverPathEnv = "FRUC_SOLVER_PATH";

/// "highs" or "subprocess". The subprocess path comes from `solver_path`,
/// else from $FRUC_SOLVER_PATH.
std::unique_ptr<SolverBackend> make_backend(
    const std::string& name,
    const std::optional<std::filesystem::path>& solver_path = std::nullopt);

/// Parses a HiGHS raw-style solution file (`write_solution_style` 0).
Solution parse_highs_solution(std::string_view text, const MipModel& model);

/// Backend solve followed by integer rounding, optional polishing, and a
/// feasibility pass. Status is downgraded to Error if the returned point
/// violates the model by more than 1e-6.
Solution solve(const MipModel& model, const SolverBackend& backend,
               const SolveOptions& options = {});

}  // namespace fruc

#endif  // FRUC_MIP_HPP
