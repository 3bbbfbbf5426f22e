#include <iostream>

#include "lavanet/cli.hpp"

int main(int argc, char** argv) { return lavanet::cli::runCli(argc, argv, std::cout, std::cerr); }
