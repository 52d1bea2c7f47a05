#include "lspec/cli.hpp"

int main(int argc, char** argv) { return lspec::cli::main_entry(argc, argv); }
