#include "matool/cli/run.hpp"

int main(int argc, char** argv) {
  return matool::cli::run(argc, argv);
}
