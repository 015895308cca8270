#include <iostream>

#include "sunflower_cli.hpp"

int main(int argc, char** argv) { return sunflower::cli::run_cli(argc, argv, std::cout, std::cerr); }
