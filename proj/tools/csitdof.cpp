#include "csitdof/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return csitdof::run_cli(argc, argv, std::cout, std::cerr); }
