#include "cli.hpp"

int main(int argc, char** argv) { return intcond::cli::run(argc, argv); }
