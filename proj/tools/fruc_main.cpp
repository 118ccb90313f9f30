#include "fruc/scenario_runner.hpp"

int main(int argc, char** argv) { return fruc::cli_main(argc, argv); }
