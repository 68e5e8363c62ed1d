#include "bqcs/cli.hpp"

int main(int argc, char** argv) { return bqcs::cli_main(argc, argv); }
