#include <iostream>

#include "scdt/cli.hpp"

int main(int argc, char** argv) { return scdt::cli::run(argc, argv, std::cout, std::cerr); }
