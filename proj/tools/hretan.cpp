#include <iostream>

#include "hretan/cli.hpp"

int main(int argc, char** argv) { return hretan::cli::main(argc, argv, std::cout, std::cerr); }
