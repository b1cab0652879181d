#include "grabqc/cli.hpp"

int main(int argc, char** argv) { return grabqc::cli::run(argc, argv); }
