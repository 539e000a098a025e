#include <iostream>

#include "rrdlab/cli.hpp"

int main(int argc, char** argv) { return rrdlab::run_command(argc, argv, std::cout, std::cerr); }
