#include <iostream>

#include "qosbroker/cli.hpp"

int main(int argc, char** argv) { return qosbroker::cli::run(argc, argv, std::cout, std::cerr); }
