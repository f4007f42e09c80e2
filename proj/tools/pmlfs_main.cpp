#include <iostream>

#include "pmlfs/cli.hpp"

int main(int argc, char** argv) { return pmlfs::run_cli(argc, argv, std::cout, std::cerr); }
