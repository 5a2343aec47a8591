#include "cli.hpp"

int main(int argc, char** argv) { return starfree::cli::run(argc, argv); }
