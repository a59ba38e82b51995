#include <iostream>

#include "jacobi/cli.hpp"

int main(int argc, char** argv) { return jacobi::cli::main_entry(argc, argv, std::cout, std::cerr); }
