#include "adaptdim/cli.hpp"

int main(int argc, char** argv) { return adaptdim::cli::main_entry(argc, argv); }
