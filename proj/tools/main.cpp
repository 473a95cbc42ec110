#include <iostream>

#include "psn/cli.hpp"

int main(int argc, char** argv) { return psn::run_command(argc, argv, std::cout, std::cerr); }
