#pragma once

#include <iosfwd>

namespace flowsched::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kCheckFailed = 3,
    kEngineError = 4,
};

/// Entry point shared by the executable and the tests. Commands: run, sweep,
/// adversary, verify, gen.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace flowsched::cli
