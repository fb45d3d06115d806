#include <iostream>

#include "simpkit/cli.hpp"

int main(int argc, char** argv) { return simpkit::cli::run(argc, argv, std::cout, std::cerr); }
