#pragma once

#include <string>
#include <vector>

namespace tvgl::cli {

// Exit codes: 0 success, 2 configuration error, 3 numerical failure
// (singular input, empty window, flagged non-convergence), 4 I/O failure.
int run(int argc, const char* const* argv);

/// Same entry point with the arguments after the program name.
int run(const std::vector<std::string>& args);

}  // namespace tvgl::cli
