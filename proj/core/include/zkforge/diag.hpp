#pragma once

#include <stdexcept>
#include <string>

namespace zkforge {

struct SrcLoc {
    int line = 0;
    int col = 0;
};

/* Raised for every front-end and lowering failure. The message is already
 * formatted as file:line:col: text. */
struct CompileError : std::runtime_error {
    CompileError(const std::string& file, SrcLoc loc, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(loc.line) + ":" +
                             std::to_string(loc.col) + ": " + msg),
          loc(loc) {}
    SrcLoc loc;
};

} // namespace zkforge
