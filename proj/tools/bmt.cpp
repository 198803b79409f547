#include "bmt/cli.hpp"

int main(int argc, char** argv) { return bmt::run_cli(argc, argv); }
