#include <iostream>

#include "fqc/cli/commands.hpp"

int main(int argc, char** argv) { return fqc::cli::run_cli(argc, argv, std::cout, std::cerr); }
