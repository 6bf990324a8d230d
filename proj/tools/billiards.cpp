#include <iostream>

#include "billiards/cli.hpp"

int main(int argc, char** argv) { return billiards::cli::main(argc, argv, std::cout, std::cerr); }
