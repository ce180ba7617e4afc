#pragma once

#include <iostream>

namespace mrpi {

/// Entry point of the `mrpi` command. Returns the process exit status:
/// 0 on success, 1 on I/O, format or parameter errors, 2 on numerical divergence.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace mrpi
