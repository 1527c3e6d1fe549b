#include <iostream>

#include "cvf_cli/cli.hpp"

int main(int argc, char** argv) { return cvf::cli::run_cli(argc, argv, std::cout, std::cerr); }
