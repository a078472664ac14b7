#include <string>
#include <vector>

#include "star/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return star::run_cli(args);
}
