#include <iostream>

#include "ppmlrank/cli.hpp"

int main(int argc, char** argv) { return ppmlrank::cli::run_cli(argc, argv, std::cout, std::cerr); }
