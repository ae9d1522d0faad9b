#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "crd/cli.hpp"

int main(int argc, char** argv) {
  try {
    return crd::run_cli(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
