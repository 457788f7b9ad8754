#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcn {

/// Shape or index misuse: mismatched jet layouts, out-of-range multi-indices,
/// wrong vector lengths.
class StructuralError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A numerical domain violation: division by a zero constant term, ln of a
/// nonpositive value, a singular metric, a null 2-plane.
class SingularityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parse failure in an expression or configuration file. `offset()` is the
/// byte offset into the parsed text.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset), message_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::size_t offset_;
  std::string message_;
};

} // namespace hcn
