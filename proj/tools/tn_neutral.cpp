#include <iostream>

#include "tn/cli.hpp"

int main(int argc, char** argv) { return tn::cli_main(argc, argv, std::cout, std::cerr); }
