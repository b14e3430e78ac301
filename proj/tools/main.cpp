#include <iostream>

#include "slag/cli.hpp"

int main(int argc, char** argv) { return slag::cli::run(argc, argv, std::cout, std::cerr); }
