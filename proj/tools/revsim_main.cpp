#include "revsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return revsim::run_cli(argc, argv, std::cout, std::cerr); }
