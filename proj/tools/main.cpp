#include "hermat/cli.hpp"

int main(int argc, char** argv) { return hermat::run_cli(argc, argv); }
