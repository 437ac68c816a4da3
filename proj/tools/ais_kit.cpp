#include <iostream>

#include "ais/harness/cli.hpp"

int main(int argc, char** argv) { return ais::harness::cli_main(argc, argv, std::cout, std::cerr); }
