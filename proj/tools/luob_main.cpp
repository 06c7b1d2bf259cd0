#include "luob/cli.hpp"

int main(int argc, char** argv) { return luob::run_cli(argc, argv); }
