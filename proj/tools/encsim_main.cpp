#include "encsim/cli.hpp"

int main(int argc, char** argv) { return encsim::cli::run(argc, argv); }
