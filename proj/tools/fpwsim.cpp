#include <iostream>
#include <string>
#include <vector>

#include "fpw/workbench.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fpw::run_workbench(args, std::cout, std::cerr).exit_status;
}
