#include "hive/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hive::run_cli(argc, argv, std::cout, std::cerr); }
