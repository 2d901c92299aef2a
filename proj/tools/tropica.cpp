#include "tropica/cli.hpp"

int main(int argc, char** argv) { return tropica::cli::run(argc, argv); }
