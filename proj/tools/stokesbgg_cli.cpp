#include "stokesbgg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stokesbgg::run_cli(args);
}
