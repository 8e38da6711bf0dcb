#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quadflow/error.hpp"

namespace quadflow::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kMalformed = 1;
inline constexpr int kConstraint = 2;
inline constexpr int kNonGeneric = 3;
inline constexpr int kPole = 4;
inline constexpr int kMismatch = 5;  // roundtrip disagreement or verify above threshold

int exit_code(ErrorCode code);

// args excludes the program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quadflow::cli
