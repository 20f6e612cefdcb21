#include <iostream>

#include "rdrl/cli/commands.hpp"

int main(int argc, char** argv) { return rdrl::cli::run(argc, argv, std::cout, std::cerr); }
