#include <iostream>

#include "iirrelay/harness.hpp"

int main(int argc, char** argv) { return iirrelay::run_cli(argc, argv, std::cout, std::cerr); }
