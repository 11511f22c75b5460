#include "hvi/cli.hpp"

int main(int argc, char** argv) { return hvi::cli_main(argc, argv); }
