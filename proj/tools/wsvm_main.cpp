#include <iostream>

#include "wsvm/cli.hpp"

int main(int argc, char** argv) { return wsvm::run_cli(argc, argv, std::cout, std::cerr); }
