#include "bikerisk/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bikerisk::cli::run(argc, argv, std::cout, std::cerr); }
