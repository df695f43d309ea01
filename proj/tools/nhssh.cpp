#include "nhssh/cli.hpp"

int main(int argc, char** argv) { return nhssh::cli_main(argc, argv); }
