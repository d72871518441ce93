#include "stackyfan/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  auto result = stackyfan::run_command(args);
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
