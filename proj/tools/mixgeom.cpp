#include "mixgeom/cli.hpp"

int main(int argc, char** argv) { return mixgeom::cli::main_entry(argc, argv); }
