// Minimal stand-alone HiGHS driver accepting the flags of the upstream
// `highs` executable that the subprocess backend passes by default.

#include <CLI11.hpp>
#include <Highs.h>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Solve an LP/MPS model with HiGHS"};
  std::string model_file, solution_file;
  double time_limit = 600.0, gap = 1e-4;
  bool quiet = false;
  app.add_option("model", model_file, "Model file");
  app.add_option("--model_file", model_file, "Model file");
  app.add_option("--solution_file", solution_file, "Raw solution output file");
  app.add_option("--time_limit", time_limit)->check(CLI::PositiveNumber);
  app.add_option("--mip_rel_gap", gap)->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", quiet, "Suppress the solver log");
  CLI11_PARSE(app, argc, argv);
  if (model_file.empty()) {
    std::cerr << "no model file given\n";
    return 1;
  }

  Highs highs;
  highs.setOptionValue("output_flag", !quiet);
  highs.setOptionValue("time_limit", time_limit);
  highs.setOptionValue("mip_rel_gap", gap);
  if (highs.readModel(model_file) == HighsStatus::kError) {
    std::cerr << "cannot read " << model_file << '\n';
    return 1;
  }
  if (highs.run() == HighsStatus::kError) return 1;
  if (!solution_file.empty() &&
      highs.writeSolution(solution_file, kSolutionStyleRaw) == HighsStatus::kError)
    return 1;
  return 0;
}
