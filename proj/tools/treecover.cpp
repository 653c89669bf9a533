#include <iostream>

#include "treecover/cli.hpp"

int main(int argc, char** argv) {
  return treecover::run_cli(argc, argv, std::cout, std::cerr);
}
