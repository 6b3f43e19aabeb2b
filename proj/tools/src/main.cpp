#include <iostream>

#include "folcalc_cli/cli.hpp"

int main(int argc, char** argv) { return folcalc::cli::main_entry(argc, argv, std::cout, std::cerr); }
