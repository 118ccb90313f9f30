#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "fruc_cli_test";

// Small enough to solve in well under a second.
const char* kTinyConfig = R"(name: tiny
groups:
  - {name: ccgt, technology: ccgt, n_units: 2, pfr_max_mw: 60, sfr_max_mw: 80}
  - {name: ocgt, technology: ocgt, n_units: 2, pfr_max_mw: 60, sfr_max_mw: 100}
storage:
  - {name: phs, e_max_mwh: 400, p_charge_max_mw: 100, p_discharge_max_mw: 100, fr_max_mw: 30,
     e_initial_mwh: 200}
profile:
  demand_mw: [300, 420, 600, 510, 350, 280]
frequency:
  infeed_loss_mw: 40
)";

int exit_code(const std::string& args, const std::string& tag = "cmd") {
  fs::create_directories(kWork);
  const std::string cmd = std::string("\"") + FRUC_CLI_EXE + "\" " + args + " > \"" +
                          (kWork / (tag + ".out")).string() + "\" 2> \"" +
                          (kWork / (tag + ".err")).string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("run writes the summary and hourly table") {
  const auto cfg = write_config("tiny.yaml", kTinyConfig);
  const auto out = kWork / "run_out";
  fs::remove_all(out);
  CHECK(exit_code("run " + quoted(cfg) + " --efr 10 --out " + quoted(out), "run") == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "hourly.csv"));
  CHECK(slurp(kWork / "run.out").find("tiny: E = 10 MW, 6 h") != std::string::npos);

  CHECK(exit_code("verify " + quoted(out), "verify") == 0);
  CHECK(slurp(kWork / "verify.out") == "6/6 hours pass\n");
}

TEST_CASE("verify fails on a tampered result") {
  const auto cfg = write_config("tiny.yaml", kTinyConfig);
  const auto out = kWork / "tamper_out";
  fs::remove_all(out);
  REQUIRE(exit_code("run " + quoted(cfg) + " --out " + quoted(out) + " --no-balancing") == 0);
  // Cut the inertia of every hour to a quarter.
  std::ifstream in(out / "hourly.csv");
  std::string header, line, rewritten;
  std::getline(in, header);
  rewritten = header + "\n";
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell, row;
    for (int c = 0; std::getline(ss, cell, ','); ++c) {
      if (c == 7) cell = std::to_string(std::stod(cell) / 4);
      row += (c ? "," : "") + cell;
    }
    rewritten += row + "\n";
  }
  in.close();
  std::ofstream(out / "hourly.csv") << rewritten;
  CHECK(exit_code("verify " + quoted(out), "tampered") == 1);
  CHECK(slurp(kWork / "tampered.err").find("nadir limit exceeded") != std::string::npos);
}

TEST_CASE("sweep writes its tables") {
  const auto cfg = write_config("tiny.yaml", kTinyConfig);
  const auto out = kWork / "sweep_out";
  fs::remove_all(out);
  CHECK(exit_code("sweep " + quoted(cfg) + " --levels 0,10,20 --bins 2 --out " + quoted(out)) ==
        0);
  for (const char* f : {"sweep.csv", "hourly_efr_0.csv", "hourly_efr_10.csv",
                        "hourly_efr_20.csv", "seasonal.csv", "grid.csv"})
    CHECK(fs::exists(out / f));
  const auto sweep = slurp(out / "sweep.csv");
  CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);
  CHECK(exit_code("sweep " + quoted(cfg) + " --levels 0,abc --out " + quoted(out)) == 1);
  CHECK(exit_code("sweep " + quoted(cfg) + " --levels 10,20 --out " + quoted(out)) == 1);
}

TEST_CASE("model export is deterministic") {
  const auto cfg = write_config("tiny.yaml", kTinyConfig);
  REQUIRE(exit_code("export-model " + quoted(cfg) + " --format lp", "lp1") == 0);
  REQUIRE(exit_code("export-model " + quoted(cfg) + " --format lp", "lp2") == 0);
  const auto a = slurp(kWork / "lp1.out");
  CHECK(a == slurp(kWork / "lp2.out"));
  CHECK(a.find("Minimize") != std::string::npos);
  CHECK(a.find("nadir_t1_s0") != std::string::npos);

  const auto mps = kWork / "tiny.mps";
  CHECK(exit_code("export-model " + quoted(cfg) + " --format mps --no-fr --out " + quoted(mps)) ==
        0);
  const auto text = slurp(mps);
  CHECK(text.rfind("NAME", 0) == 0);
  CHECK(text.find("nadir") == std::string::npos);
}

TEST_CASE("external solver path") {
  const auto cfg = write_config("tiny.yaml", kTinyConfig);
  const auto out = kWork / "sub_out";
  CHECK(exit_code("run " + quoted(cfg) + " --no-balancing --solver subprocess --solver-path \"" +
                  FRUC_HIGHS_EXE + "\" --out " + quoted(out)) == 0);
  CHECK(exit_code("run " + quoted(cfg) + " --solver subprocess --solver-path /nonexistent/solver "
                  "--out " + quoted(out)) == 2);
}

TEST_CASE("exit codes for bad input and solver failure") {
  CHECK(exit_code("") == 1);
  CHECK(exit_code("run") == 1);
  CHECK(exit_code("run /nonexistent.yaml") == 1);
  const auto cfg = write_config("tiny.yaml", kTinyConfig);
  CHECK(exit_code("run " + quoted(cfg) + " --frobnicate") == 1);
  CHECK(exit_code("export-model " + quoted(cfg) + " --format xml") == 1);

  std::string short_supply = kTinyConfig;
  short_supply.replace(short_supply.find("600"), 3, "9000");
  const auto bad = write_config("short.yaml", short_supply);
  CHECK(exit_code("run " + quoted(bad) + " --out " + quoted(kWork / "x"), "short") == 1);
  CHECK(slurp(kWork / "short.err").find("hour 3") != std::string::npos);

  // Supply is adequate but the response cannot be held at hour 3.
  std::string no_headroom = kTinyConfig;
  no_headroom.replace(no_headroom.find("600"), 3, "1490");
  no_headroom.replace(no_headroom.find("infeed_loss_mw: 40"), 18, "infeed_loss_mw: 400");
  const auto tight = write_config("tight.yaml", no_headroom);
  CHECK(exit_code("run " + quoted(tight) + " --out " + quoted(kWork / "x"), "tight") == 2);
  CHECK(slurp(kWork / "tight.err").find("first infeasible at hour") != std::string::npos);
  CHECK(exit_code("--help") == 0);
}
