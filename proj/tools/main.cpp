#include <iostream>

#include "fracstep/cli.hpp"

int main(int argc, char** argv) { return fracstep::run_cli(argc, argv, std::cout, std::cerr); }
