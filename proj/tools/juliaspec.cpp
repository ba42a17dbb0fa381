#include <iostream>

#include "juliaspec/cli.hpp"

int main(int argc, char** argv) { return juliaspec::run_cli(argc, argv, std::cout, std::cerr); }
