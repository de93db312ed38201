#include "extauto/cli.hpp"

int main(int argc, char** argv) { return extauto::run_cli(argc, argv); }
