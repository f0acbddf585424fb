#include "ftn/cli.hpp"

int main(int argc, char** argv) { return ftn::cli_main(argc, argv); }
