#include "patmat/errors.hpp"

namespace patmat {

PatternSyntaxError::PatternSyntaxError(const std::string& what, std::size_t line,
                                       std::size_t column)
    : ValidationError("syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace patmat
