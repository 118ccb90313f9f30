#include <doctest.h>

#include "fruc/mip.hpp"

#include <cstdlib>
#include <random>

using namespace fruc;

namespace {

// min -x - 1.5y + 0.5z  s.t.  x + 2y <= 7,  x - z = 1,  y + z >= -3,
// x in {0..4}, y >= 0, z free.  Optimum -5.75 at x = 0, y = 3.5, z = -1.
MipModel small_model() {
  MipModel m;
  const int x = m.add_integer("x", 0, 4);
  const int y = m.add_continuous("y", 0, kInf);
  const int z = m.add_continuous("z", -kInf, kInf);
  m.add_constraint("c1", {{x, 1}, {y, 2}}, Sense::LessEqual, 7);
  m.add_constraint("c2", {{x, 1}, {z, -1}}, Sense::Equal, 1);
  m.add_constraint("c3", {{y, 1}, {z, 1}}, Sense::GreaterEqual, -3);
  m.add_objective(LinearExpr{{x, -1}, {y, -1.5}, {z, 0.5}});
  return m;
}

struct IntegerProgram {
  MipModel model;
  Eigen::MatrixXd A;
  Eigen::VectorXd b, c;
  int upper = 0;
};

IntegerProgram random_integer_program(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coef(-4, 6);
  IntegerProgram p;
  const int n = 3, rows = 3;
  p.upper = 4;
  p.A.resize(rows, n);
  p.b.resize(rows);
  p.c.resize(n);
  for (int j = 0; j < n; ++j) {
    p.model.add_integer("x" + std::to_string(j), 0, p.upper);
    p.c(j) = -coef(rng) - 1;
  }
  for (int i = 0; i < rows; ++i) {
    LinearExpr e;
    for (int j = 0; j < n; ++j) {
      p.A(i, j) = coef(rng);
      e.add(j, p.A(i, j));
    }
    p.b(i) = std::uniform_int_distribution<int>(2, 12)(rng);
    p.model.add_constraint("r" + std::to_string(i), e, Sense::LessEqual, p.b(i));
  }
  LinearExpr obj;
  for (int j = 0; j < n; ++j) obj.add(j, p.c(j));
  p.model.add_objective(obj);
  return p;
}

double enumerate_optimum(const IntegerProgram& p) {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector3d x;
  for (int a = 0; a <= p.upper; ++a)
    for (int b = 0; b <= p.upper; ++b)
      for (int c = 0; c <= p.upper; ++c) {
        x << a, b, c;
        if (((p.A * x - p.b).array() <= 1e-12).all()) best = std::min(best, p.c.dot(x));
      }
  return best;
}

}  // namespace

TEST_CASE("constraints merge repeated terms and move constants right") {
  MipModel m;
  const int x = m.add_continuous("x");
  const int y = m.add_continuous("y");
  LinearExpr e{{y, 1}, {x, 2}, {y, 3}};
  e.constant = 5;
  m.add_constraint("row", e, Sense::LessEqual, 10);
  const auto& c = m.constraint(0);
  REQUIRE(c.terms.size() == 2);
  CHECK(c.terms[0].var == x);
  CHECK(c.terms[0].coef == 2);
  CHECK(c.terms[1].var == y);
  CHECK(c.terms[1].coef == 4);
  CHECK(c.rhs == 5);

  const Eigen::SparseMatrix<double, Eigen::RowMajor> A = m.constraint_matrix();
  CHECK(A.rows() == 1);
  CHECK(A.cols() == 2);
  CHECK(A.coeff(0, 1) == 4);
}

TEST_CASE("model building rejects malformed input") {
  MipModel m;
  m.add_continuous("x");
  CHECK_THROWS_AS(m.add_continuous("x"), ModelError);
  CHECK_THROWS_AS(m.add_continuous("lo_hi", 2, 1), ModelError);
  CHECK_THROWS_AS(m.add_integer("unbounded", 0, kInf), ModelError);
  CHECK_THROWS_AS(m.add_constraint("bad", {{7, 1.0}}, Sense::Equal, 0), ModelError);
  m.add_constraint("ok", {{0, 1.0}}, Sense::Equal, 0);
  CHECK_THROWS_AS(m.add_constraint("ok", {{0, 1.0}}, Sense::Equal, 0), ModelError);
}

TEST_CASE("LP export is exact and repeatable") {
  const MipModel m = small_model();
  const std::string expected =
      "\\ fruc model: 3 variables, 3 constraints\n"
      "Minimize\n"
      " obj: - 1 x - 1.5 y + 0.5 z\n"
      "Subject To\n"
      " c1: + 1 x + 2 y <= 7\n"
      " c2: + 1 x - 1 z = 1\n"
      " c3: + 1 y + 1 z >= -3\n"
      "Bounds\n"
      " 0 <= x <= 4\n"
      " y >= 0\n"
      " z free\n"
      "General\n"
      " x\n"
      "End\n";
  CHECK(export_model(m, ExportFormat::Lp) == expected);
  CHECK(export_model(small_model(), ExportFormat::Lp) == expected);
  CHECK(export_model(m, ExportFormat::Mps) == export_model(small_model(), ExportFormat::Mps));
}

TEST_CASE("MPS export marks integers and writes every bound") {
  const std::string mps = export_model(small_model(), ExportFormat::Mps);
  CHECK(mps.find("'MARKER' 'INTORG'") != std::string::npos);
  CHECK(mps.find("'MARKER' 'INTEND'") != std::string::npos);
  CHECK(mps.find(" UP BND x 4") != std::string::npos);
  CHECK(mps.find(" FR BND z") != std::string::npos);
  CHECK(mps.find(" E  c2") != std::string::npos);
}

TEST_CASE("export refuses names the format cannot carry") {
  MipModel lp_bad;
  lp_bad.add_continuous("2fast");
  CHECK_THROWS_AS(export_model(lp_bad, ExportFormat::Lp), ExportError);
  CHECK_NOTHROW(export_model(lp_bad, ExportFormat::Mps));

  MipModel both_bad;
  both_bad.add_continuous("has space");
  CHECK_THROWS_AS(export_model(both_bad, ExportFormat::Lp), ExportError);
  CHECK_THROWS_AS(export_model(both_bad, ExportFormat::Mps), ExportError);
}

TEST_CASE("objective row name avoids clashing with a constraint") {
  MipModel m;
  const int x = m.add_continuous("x", 0, 1);
  m.add_constraint("obj", {{x, 1}}, Sense::LessEqual, 1);
  m.add_objective(LinearExpr{{x, 1}});
  const std::string lp = export_model(m, ExportFormat::Lp);
  CHECK(lp.find(" obj_: + 1 x") != std::string::npos);
}

TEST_CASE("in-process solve of a mixed model") {
  HighsBackend backend;
  const auto sol = solve(small_model(), backend);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-5.75));
  CHECK(*sol.value("x") == doctest::Approx(0));
  CHECK(*sol.value("y") == doctest::Approx(3.5));
  CHECK(*sol.value("z") == doctest::Approx(-1));
  CHECK_FALSE(sol.value("nope").has_value());
}

TEST_CASE("random integer programs match enumeration") {
  HighsBackend backend;
  SolveOptions o;
  o.gap_tolerance = 0.0;
  for (unsigned seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    const auto p = random_integer_program(seed);
    const double ref = enumerate_optimum(p);
    const auto sol = solve(p.model, backend, o);
    REQUIRE(sol.status == SolveStatus::Optimal);  // x = 0 is always feasible
    CHECK(sol.objective == doctest::Approx(ref).epsilon(1e-9));
    for (int j = 0; j < 3; ++j) CHECK(sol[j] == std::round(sol[j]));
  }
}

TEST_CASE("infeasible and unbounded models are reported as such") {
  HighsBackend backend;
  MipModel inf;
  const int x = inf.add_integer("x", 0, 3);
  inf.add_constraint("low", {{x, 1}}, Sense::GreaterEqual, 5);
  const auto a = solve(inf, backend);
  CHECK(a.status == SolveStatus::Infeasible);
  CHECK_FALSE(a.has_values());

  MipModel unb;
  const int y = unb.add_continuous("y", 0, kInf);
  unb.add_constraint("any", {{y, 1}}, Sense::GreaterEqual, 1);
  unb.add_objective(LinearExpr{{y, -1}});
  CHECK(solve(unb, backend).status == SolveStatus::Unbounded);
}

TEST_CASE("a model without variables solves trivially") {
  HighsBackend backend;
  const auto sol = solve(MipModel{}, backend);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == 0.0);
}

TEST_CASE("feasibility check names violated rows and bounds") {
  const MipModel m = small_model();
  Eigen::VectorXd x(3);
  x << 0, 3.5, -1;
  CHECK(check_feasibility(m, x).empty());
  x << 0.5, 3.5, -0.5;
  const auto v = check_feasibility(m, x);
  CHECK_FALSE(v.empty());
  x << 5, 0, 4;
  CHECK_FALSE(check_feasibility(m, x).empty());
}

TEST_CASE("raw solution files parse by column name") {
  const MipModel m = small_model();
  const std::string text =
      "Model status\nOptimal\n\n# Primal solution values\nFeasible\nObjective -5.75\n"
      "# Columns 3\nz -1\nx 0\ny 3.5\n# Rows 3\nc1 7\nc2 1\nc3 2.5\n";
  const auto sol = parse_highs_solution(text, m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == -5.75);
  CHECK(sol[0] == 0);
  CHECK(sol[1] == 3.5);
  CHECK(sol[2] == -1);

  const auto inf = parse_highs_solution("Model status\nInfeasible\n\n# Primal solution values\nNone\n", m);
  CHECK(inf.status == SolveStatus::Infeasible);
  CHECK(parse_highs_solution("garbage", m).status == SolveStatus::Error);
}

TEST_CASE("subprocess backend agrees with the in-process solver") {
  SubprocessConfig cfg;
  cfg.executable = FRUC_HIGHS_EXE;
  for (auto fmt : {ExportFormat::Mps, ExportFormat::Lp}) {
    cfg.format = fmt;
    SubprocessBackend backend(cfg);
    const auto sol = solve(small_model(), backend);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-5.75));
    CHECK(*sol.value("y") == doctest::Approx(3.5));
  }
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto p = random_integer_program(seed);
    SubprocessBackend backend(cfg);
    CHECK(solve(p.model, backend).objective ==
          doctest::Approx(solve(p.model, HighsBackend{}).objective));
  }
}

TEST_CASE("backend selection") {
  CHECK(make_backend("highs")->name() == "highs");
  CHECK(make_backend("subprocess", std::filesystem::path(FRUC_HIGHS_EXE))->name() == "subprocess");
  CHECK_THROWS_AS(make_backend("cplex"), SolverUnavailable);
  ::unsetenv(kSolverPathEnv);
  CHECK_THROWS_AS(make_backend("subprocess"), SolverUnavailable);
  ::setenv(kSolverPathEnv, FRUC_HIGHS_EXE, 1);
  CHECK(make_backend("subprocess")->name() == "subprocess");
  ::unsetenv(kSolverPathEnv);

  SubprocessConfig cfg;
  cfg.executable = "/nonexistent/solver";
  SubprocessBackend missing(cfg);
  const auto sol = solve(small_model(), missing);
  CHECK(sol.status == SolveStatus::Error);
}
