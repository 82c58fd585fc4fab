#include "lrvlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lrvlab::cli::run(argc, argv, std::cout, std::cerr); }
