#include <iostream>

#include "tubeband/cli.hpp"

int main(int argc, char** argv) { return tubeband::cli::run(argc, argv, std::cout, std::cerr); }
