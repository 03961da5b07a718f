#include "cli.hpp"

int main(int argc, char** argv) { return dirac::cli::run(argc, argv); }
