#pragma once

#include <stdexcept>
#include <string>

namespace ads {

/// Shape disagreement between containers that must match.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument or configuration outside its documented domain.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input that makes the requested operation meaningless (e.g. all-zero weights).
struct DegenerateInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A required column is missing or the file layout is wrong.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cell failed to parse; message carries file and line.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ads
