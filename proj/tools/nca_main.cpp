#include <iostream>

#include "nca/cli.hpp"

int main(int argc, char** argv) {
  return nca::cli::cli_main(argc, argv, std::cout, std::cerr);
}
