#pragma once

#include <ostream>

namespace csitdof {

/// Exit codes of the csitdof command.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitParse = 2,
    kExitDimension = 3,
    kExitNotSynthesizable = 4,
    kExitInternal = 5,
};

/// Runs one csitdof command line; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csitdof
