#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace typedcrf {

// Shape disagreement between schema, instance, labeling or weights.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A constraint literal that does not resolve to a variable of the graph,
// or a malformed constraint.
struct InvalidConstraintError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedFactorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The hard-constraint system admits no feasible assignment.
struct UnsatisfiableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance too large for an exact method.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  std::size_t line_number;
};

}  // namespace typedcrf
