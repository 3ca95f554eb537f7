#include "cli.hpp"

int main(int argc, char** argv) { return hyperwalk::cli::cli_main(argc, argv); }
