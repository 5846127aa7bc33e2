#include "rank1/cli.hpp"

int main(int argc, char** argv) { return rank1::cli::run(argc, argv); }
