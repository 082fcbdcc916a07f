#include <iostream>

#include "ssfd/cli.hpp"

int main(int argc, char** argv) { return ssfd::cli_main(argc, argv, std::cout, std::cerr); }
