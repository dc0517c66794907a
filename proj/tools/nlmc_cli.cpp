#include <iostream>

#include "nlmc/cli.hpp"

int main(int argc, char** argv) { return nlmc::run_cli(argc, argv, std::cout, std::cerr); }
