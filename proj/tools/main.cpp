#include <iostream>

#include "ttrace/cli.hpp"

int main(int argc, char** argv) { return ttrace::cli::run(argc, argv, std::cout, std::cerr); }
