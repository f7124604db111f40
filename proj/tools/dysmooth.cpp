#include "dysmooth/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dysmooth::main_entry(argc, argv, std::cout, std::cerr); }
