#include "nuc/cli.hpp"

int main(int argc, char** argv) { return nuc::cli::run(argc, argv); }
