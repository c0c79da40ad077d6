#include <iostream>

#include "kge/cli.hpp"

int main(int argc, char** argv) { return kge::cli::main(argc, argv, std::cout, std::cerr); }
