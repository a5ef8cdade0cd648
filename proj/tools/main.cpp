#include <iostream>

#include "kasar/io/cli.hpp"

int main(int argc, char** argv) { return kasar::io::run_cli(argc, argv, std::cout, std::cerr); }
