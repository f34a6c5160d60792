#include <iostream>

#include "textpm/cli.hpp"

int main(int argc, char** argv) { return textpm::run_cli(argc, argv, std::cout, std::cerr); }
