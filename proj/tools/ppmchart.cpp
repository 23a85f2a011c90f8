#include "ppmchart/cli.hpp"

int main(int argc, char** argv) { return ppmchart::cli::run(argc, argv); }
