#include <iostream>

#include "ixdrl/pipeline.hpp"

int main(int argc, char** argv) { return ixdrl::run_cli(argc, argv, std::cout, std::cerr); }
