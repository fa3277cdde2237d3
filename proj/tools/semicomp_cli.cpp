#include <iostream>

#include "semicomp/cli.hpp"

int main(int argc, char** argv) { return semicomp::cli_main(argc, argv, std::cout, std::cerr); }
