#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return fracdual::cli::run(argc, argv, std::cout, std::cerr); }
