#include <string>
#include <vector>

#include "blorc/cli.hpp"

int main(int argc, char** argv) {
  return blorc::cli::run(std::vector<std::string>(argv, argv + argc));
}
