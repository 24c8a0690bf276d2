#include "cylpack/cli.hpp"

int main(int argc, char** argv) { return cylpack::run(argc, argv); }
