#include "oligo/cli/commands.hpp"

int main(int argc, char** argv) { return oligo::cli::run(argc, argv); }
