#include "tvgl/cli.hpp"

int main(int argc, char** argv) { return tvgl::cli::run(argc, argv); }
