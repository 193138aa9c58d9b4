#include <iostream>

#include "isingdc/cli.hpp"

int main(int argc, char** argv) { return isingdc::run_cli(argc, argv, std::cout, std::cerr); }
