#include "refclass/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return refclass::cli::run(argc, argv, std::cout, std::cerr); }
