#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polariton::cli {

enum ExitCode : int {
    kOk = 0,
    kUnexpected = 1,
    kConfigError = 2,
    kNumericalError = 3,
};

/// Runs the command line (without the program name). Errors are reported as a
/// single line "polariton: error[<kind>]: <message>" on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace polariton::cli
