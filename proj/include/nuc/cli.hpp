#pragma once

namespace nuc::cli {

/// Exit codes: 0 success, 2 usage, 3 configuration, 4 input file,
/// 5 malformed file contents, 6 internal error. Each failure prints one
/// machine-parseable line: error[<kind>]: <message>
int run(int argc, const char* const* argv);

}  // namespace nuc::cli
