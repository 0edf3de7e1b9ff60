#include "msbayes/cli.hpp"

int main(int argc, char** argv) { return msbayes::run_command(argc, argv); }
