#include "mpiassist/cli.hpp"

int main(int argc, char** argv) { return mpiassist::run_cli(argc, argv); }
