#include <iostream>

#include "eoprop/cli/commands.hpp"

int main(int argc, char** argv) { return eoprop::cli::run_cli(argc, argv, std::cout, std::cerr); }
