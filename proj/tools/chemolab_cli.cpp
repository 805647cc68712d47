#include "chemolab/harness.hpp"

int main(int argc, char** argv) { return chemolab::cli_main(argc, argv); }
