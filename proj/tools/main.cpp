#include "gts/cli.hpp"

int main(int argc, char** argv) { return gts::cli::main(argc, argv); }
