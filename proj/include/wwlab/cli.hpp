#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wwlab {

/// Command-line entry point: orbit, average, sup-ww, seminorm, vdc-check,
/// experiment. Returns 0 on success, 1 on input errors (including unknown
/// flags), 2 when an assertion or experiment check fails.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, char** argv);

}  // namespace wwlab
