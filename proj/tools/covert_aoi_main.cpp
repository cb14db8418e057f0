#include <iostream>

#include "covert_aoi/cli.hpp"

int main(int argc, char** argv) {
  return covert_aoi::run_cli(argc, argv, std::cout, std::cerr);
}
