#include <iostream>

#include "wbtree/cli.hpp"

int main(int argc, char** argv) { return wbtree::cli::run(argc, argv, std::cout, std::cerr); }
