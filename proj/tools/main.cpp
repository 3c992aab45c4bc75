#include <iostream>

#include "spectral_hardy/cli.hpp"

int main(int argc, char** argv) { return spectral_hardy::cli::run(argc, argv, std::cout, std::cerr); }
