#include "wpl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wpl::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
