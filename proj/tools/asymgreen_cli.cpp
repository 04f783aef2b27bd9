#include <iostream>
#include <string_view>
#include <vector>

#include "asymgreen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string_view> args(argv, argv + argc);
  return asymgreen::run_command(args, std::cout, std::cerr);
}
