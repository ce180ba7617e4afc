#include "mrpi/cli.hpp"

int main(int argc, char** argv) { return mrpi::run_cli(argc, argv); }
