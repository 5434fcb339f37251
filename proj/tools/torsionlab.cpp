#include <iostream>

#include "torsionlab/cli.hpp"

int main(int argc, char** argv) {
  return torsionlab::run_cli(argc, argv, std::cout, std::cerr);
}
