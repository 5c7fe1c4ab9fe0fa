#include "cflow/cli.hpp"

int main(int argc, char** argv) { return cflow::main_cli(argc, argv); }
