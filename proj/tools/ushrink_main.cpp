#include <iostream>
#include <string>
#include <vector>

#include "ushrink/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ushrink::cli::main_entry(args, std::cout, std::cerr);
}
