#include "semiscat/cli.hpp"

int main(int argc, char** argv) { return semiscat::cli::main(argc, argv); }
