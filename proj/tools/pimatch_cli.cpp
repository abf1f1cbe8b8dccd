#include "pimatch/cli.hpp"

int main(int argc, char** argv) { return pimatch::cli::run_cli(argc, argv); }
