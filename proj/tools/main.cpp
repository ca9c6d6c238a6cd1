#include "cli/commands.hpp"

int main(int argc, char** argv) { return tfpl::cli::run_cli(argc, argv); }
