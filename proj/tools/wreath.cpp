#include <iostream>

#include "wreath/cli.hpp"

int main(int argc, char** argv) {
  return wreath::run_cli(argc, argv, std::cout, std::cerr);
}
