#include <string>
#include <vector>

#include "typedcrf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return typedcrf::run_cli(args);
}
