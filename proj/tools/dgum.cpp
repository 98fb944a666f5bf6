#include "dgum/cli.hpp"

int main(int argc, char** argv) { return dgum::cli::run(argc, argv); }
