#include <iostream>

#include "arcd/cli.hpp"

int main(int argc, char** argv) { return arcd::cli::run(argc, argv, std::cout, std::cerr); }
