#include <iostream>

#include "uim/cli/cli.hpp"

int main(int argc, char** argv) { return uim::cli::run(argc, argv, std::cout, std::cerr); }
