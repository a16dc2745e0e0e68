#include "mcsig/cli.hpp"

int main(int argc, char** argv) { return mcsig::run_cli(argc, argv); }
