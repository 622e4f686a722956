#include "cli.hpp"

int main(int argc, char** argv) { return hht::cli::run(argc, argv); }
