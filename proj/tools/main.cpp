#include "cli.hpp"

int main(int argc, char** argv) { return fqse::cli::run(argc, argv); }
