#include "sbd/cli_io.hpp"

int main(int argc, char** argv) { return sbd::run_cli(argc, argv); }
