#include "hypac/cli.hpp"

int main(int argc, char** argv) { return hypac::cli::main(argc, argv); }
