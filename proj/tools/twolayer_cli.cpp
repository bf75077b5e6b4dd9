#include "twolayer/cli.hpp"

int main(int argc, char** argv) { return twolayer::cli::main(argc, argv); }
