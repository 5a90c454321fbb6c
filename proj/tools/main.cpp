#include "cli.hpp"

int main(int argc, char** argv) { return affsob::cli_main(argc, argv); }
