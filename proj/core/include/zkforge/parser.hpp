#pragma once

#include <string>

#include "zkforge/ast.hpp"

namespace zkforge {

/* Parses a whole source file. Throws CompileError. */
ast::Program parse_program(const std::string& source, const std::string& file);

/* Reads the file from disk and parses it. */
ast::Program parse_file(const std::string& path);

} // namespace zkforge
