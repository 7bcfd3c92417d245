#include <iostream>

#include "tlab/cli.hpp"

int main(int argc, char** argv) { return tlab::cli::run(argc, argv, std::cout, std::cerr); }
